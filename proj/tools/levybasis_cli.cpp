#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "levybasis/config.hpp"
#include "levybasis/integrator.hpp"
#include "levybasis/modular.hpp"
#include "levybasis/report_io.hpp"
#include "levybasis/verify.hpp"

using namespace levybasis;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> experiments;
  std::optional<double> tolerance_scale;
  std::optional<unsigned> workers;
  std::optional<std::size_t> replicates;
  bool all = false;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

/// Flags override environment variables, which override the config file.
RunConfig resolve(const Flags& flags) {
  RunConfig cfg = flags.config.empty() ? parse_config(nlohmann::json::object()) : load_config_file(flags.config);
  if (auto s = env("LEVYBASIS_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(*s, &used);
      if (used != s->size() || s->front() == '-') throw std::invalid_argument(*s);
      cfg.seed = v;
    } catch (const std::exception&) {
      throw ConfigError("LEVYBASIS_SEED", "must be an unsigned 64-bit integer");
    }
  }
  if (auto o = env("LEVYBASIS_OUT")) cfg.output_dir = *o;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out) cfg.output_dir = *flags.out;
  if (flags.tolerance_scale) {
    if (!(*flags.tolerance_scale > 0.0)) throw ConfigError("--tolerance-scale", "must be positive");
    cfg.tolerance_scale = *flags.tolerance_scale;
  }
  if (flags.workers) {
    if (*flags.workers == 0) throw ConfigError("--workers", "must be positive");
    cfg.workers = *flags.workers;
  }
  if (flags.replicates) {
    if (*flags.replicates == 0) throw ConfigError("--replicates", "must be positive");
    cfg.replicates = *flags.replicates;
  }
  return cfg;
}

const CharacteristicTriplet& need_triplet(const RunConfig& cfg, const char* command) {
  if (!cfg.triplet) throw ConfigError("triplet", std::string("required by '") + command + "'");
  return *cfg.triplet;
}

const GridFunction& need_integrand(const RunConfig& cfg, const char* command) {
  if (!cfg.integrand) throw ConfigError("integrand", std::string("required by '") + command + "'");
  return *cfg.integrand;
}

std::string out_path(const RunConfig& cfg, const std::string& file) { return cfg.output_dir + "/" + file; }

int run_simulate(const RunConfig& cfg) {
  const IncrementSampler sampler(need_triplet(cfg, "simulate"), cfg.sampler);
  std::ostringstream csv;
  write_field_csv_header(csv);
  const RngKey key{cfg.seed, kPrimaryComponent, 0, 0};
  for (std::size_t r = 0; r < cfg.replicates; ++r) write_field_csv_rows(csv, r, sample_field(sampler, key.with_replicate(r)));
  const std::string path = out_path(cfg, "simulate.csv");
  write_text_file(path, csv.str());
  std::cout << "simulate: " << cfg.replicates << " field(s) written to " << path << "\n";
  return 0;
}

int run_modular(const RunConfig& cfg) {
  const CharacteristicTriplet& t = need_triplet(cfg, "modular");
  const GridFunction& f = need_integrand(cfg, "modular");
  if (!same_domain(t.domain(), f.domain())) throw ConfigError("integrand", "domain differs from the triplet's");
  const ModularReport rep = modular(t, f);
  std::ostringstream csv;
  csv << "cell,mass,zeta,eta\n";
  for (const CellModular& c : rep.per_cell)
    csv << c.cell << ',' << format_double(c.mass) << ',' << format_double(c.zeta) << ',' << format_double(c.eta) << '\n';
  write_text_file(out_path(cfg, "modular.csv"), csv.str());
  std::cout << "iota=" << format_double(rep.total) << " zeta_part=" << format_double(rep.zeta_part)
            << " eta_part=" << format_double(rep.eta_part) << (rep.infinite ? " (not integrable)" : "") << "\n";
  if (cfg.family) std::cout << "closed_form=" << format_double(closed_form_modular(*cfg.family, t, f)) << "\n";
  return 0;
}

int run_fnorm(const RunConfig& cfg) {
  const CharacteristicTriplet& t = need_triplet(cfg, "fnorm");
  const GridFunction& f = need_integrand(cfg, "fnorm");
  if (!same_domain(t.domain(), f.domain())) throw ConfigError("integrand", "domain differs from the triplet's");
  const FNormResult res = f_norm(t, f);
  std::ostringstream csv;
  csv << "norm,infinite,evaluations\n"
      << format_double(res.value) << ',' << (res.infinite ? "true" : "false") << ',' << res.evaluations << '\n';
  write_text_file(out_path(cfg, "fnorm.csv"), csv.str());
  std::cout << "fnorm=" << format_double(res.value);
  if (res.infinite) std::cout << " (not integrable: " << res.diagnostic << ")";
  std::cout << "\n";
  return 0;
}

int run_integrate(const RunConfig& cfg) {
  const CharacteristicTriplet& t = need_triplet(cfg, "integrate");
  std::optional<StepStrategy> strategy = cfg.strategy;
  if (!strategy) strategy = StepStrategy::from_grid_function(need_integrand(cfg, "integrate"));
  if (!same_domain(t.domain(), strategy->domain())) throw ConfigError("strategy", "domain differs from the triplet's");
  const IncrementSampler sampler(t, cfg.sampler);
  const RngKey key{cfg.seed, kPrimaryComponent, 0, 0};
  std::ostringstream values;
  std::ostringstream traj;
  values << "replicate,value\n";
  traj << "replicate,block,t,value\n";
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const IntegrationResult run = integrate_predictable(*strategy, sampler, key.with_replicate(r));
    values << r << ',' << format_double(run.value) << '\n';
    write_trajectory_csv_rows(traj, r, run);
  }
  write_text_file(out_path(cfg, "integrate.csv"), values.str());
  write_text_file(out_path(cfg, "trajectory.csv"), traj.str());
  std::cout << "integrate: " << cfg.replicates << " replicate(s) written to " << out_path(cfg, "integrate.csv") << "\n";
  if (strategy->deterministic()) {
    const IntegralLaw law = integral_law(strategy->flatten(), t);
    std::cout << "a_I=" << format_double(law.a()) << " q_I=" << format_double(law.q())
              << " zeta_functional=" << format_double(law.zeta_functional())
              << (law.infinite() ? " (not integrable)" : "") << "\n";
  }
  return 0;
}

int run_verify(const RunConfig& cfg, const Flags& flags) {
  std::vector<std::string> names;
  if (flags.all) {
    names = experiment_names();
  } else if (!flags.experiments.empty()) {
    const auto known = experiment_names();
    for (const auto& n : flags.experiments) {
      if (std::find(known.begin(), known.end(), n) == known.end())
        throw ConfigError("--experiment", "unknown experiment '" + n + "'");
      names.push_back(n);
    }
  } else if (!cfg.experiments.empty()) {
    names = cfg.experiments;
  } else {
    names = experiment_names();
  }
  VerifyOptions options;
  options.seed = cfg.seed;
  options.tolerance_scale = cfg.tolerance_scale;
  options.workers = cfg.workers;
  options.sampler = cfg.sampler;
  std::vector<ExperimentReport> reports;
  for (const auto& n : names) {
    reports.push_back(run_experiment(n, options));
    const ExperimentReport& r = reports.back();
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " statistic=" << format_double(r.statistic)
              << " tolerance=" << format_double(r.tolerance) << (r.indicative ? " [indicative]" : "") << "\n";
    std::cerr << "  " << r.name << " took " << r.runtime_seconds << " s\n";
  }
  std::ostringstream csv;
  write_reports_csv(csv, reports);
  write_text_file(out_path(cfg, "verify.csv"), csv.str());
  write_text_file(out_path(cfg, "verify.json"), reports_to_json(reports).dump(2) + "\n");
  bool all_pass = true;
  for (const auto& r : reports) all_pass = all_pass && r.pass;
  return all_pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy basis integration toolkit"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON run configuration");
    sub->add_option("--seed", flags.seed, "master seed (overrides LEVYBASIS_SEED and the config)");
    sub->add_option("--out", flags.out, "output directory (overrides LEVYBASIS_OUT and the config)");
    sub->add_option("--tolerance-scale", flags.tolerance_scale, "multiplies every statistical tolerance");
    sub->add_option("--workers", flags.workers, "threads for replicate-parallel work");
    sub->add_option("--replicates", flags.replicates, "number of sampled replicates");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "sample increment fields to CSV");
  CLI::App* modular_cmd = app.add_subcommand("modular", "evaluate the modular of the integrand");
  CLI::App* fnorm = app.add_subcommand("fnorm", "evaluate the F-norm of the integrand");
  CLI::App* integrate = app.add_subcommand("integrate", "integrate a step strategy or grid function");
  CLI::App* verify = app.add_subcommand("verify", "run the verification experiments");
  for (CLI::App* sub : {simulate, modular_cmd, fnorm, integrate, verify}) add_common(sub);
  verify->add_option("--experiment", flags.experiments, "experiment name (repeatable)");
  verify->add_flag("--all", flags.all, "run every experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const RunConfig cfg = resolve(flags);
    if (simulate->parsed()) return run_simulate(cfg);
    if (modular_cmd->parsed()) return run_modular(cfg);
    if (fnorm->parsed()) return run_fnorm(cfg);
    if (integrate->parsed()) return run_integrate(cfg);
    return run_verify(cfg, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
