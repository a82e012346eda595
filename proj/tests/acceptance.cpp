// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include "levybasis/families.hpp"
#include "levybasis/modular.hpp"
#include "levybasis/verify.hpp"

using namespace levybasis;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

/// Runs the named experiments; each must pass on its own tolerance.
void expect_reports(Verdict& v, const std::vector<std::string>& names, double* elapsed = nullptr) {
  const auto t0 = Clock::now();
  for (const std::string& n : names) {
    const ExperimentReport r = run_experiment(n, VerifyOptions{});
    v.require(r.pass, n + " statistic " + num(r.statistic) + " > " + num(r.tolerance));
    if (r.pass) v.note(n + " " + num(r.statistic) + "<=" + num(r.tolerance));
  }
  if (elapsed) *elapsed = seconds_since(t0);
}

DomainPtr cells(std::size_t n) { return std::make_shared<const Domain>(Domain::uniform_time(1.0, n)); }

Verdict closed_form_criterion() {
  Verdict v;
  const auto t0 = Clock::now();
  const DomainPtr d = cells(8);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  const double lambda = 1.3;
  const double p = 1.5, x = 0.3, y = 0.7, rho = 1.2;
  const CharacteristicTriplet pois = families::poisson(d, lambda);
  const CharacteristicTriplet stab = families::stable(d, p, x, y, rho);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> vals(d->cell_count());
    for (double& val : vals) val = (gen() & 1 ? 1.0 : -1.0) * std::pow(10.0, e(gen));
    const GridFunction f(d, vals);
    double pois_expect = 0.0;
    double stab_expect = 0.0;
    for (double val : vals) {
      const double a = std::abs(val);
      pois_expect += (std::min(a * a, 1.0) + std::min(a, 1.0)) * lambda / 8.0;
      stab_expect += (2.0 / (2.0 - p) + std::abs(x - y) / std::abs(1.0 - p)) * std::pow(a, p) * rho / 8.0;
    }
    worst = std::max(worst, std::abs(modular_value(pois, f) - pois_expect) / pois_expect);
    worst = std::max(worst, std::abs(modular_value(stab, f) - stab_expect) / stab_expect);
  }
  v.require(worst <= 1e-8, "relative error " + num(worst));
  v.note("direct oracle max rel err " + num(worst));
  expect_reports(v, {"modular.closed_form"});
  const double t = seconds_since(t0);
  v.require(t < 5.0, "runtime " + num(t) + " s");
  return v;
}

Verdict fnorm_criterion() {
  Verdict v;
  const DomainPtr d = cells(1);
  for (double p : {0.5, 1.5}) {
    for (double m : {0.5, 1.0, 3.0}) {
      const CharacteristicTriplet t = families::stable(d, p, 0.5, 0.5, m);
      const GridFunction f = GridFunction::constant(d, 1.0);
      const double c = f_norm(t, f).value;
      const double root = std::pow(2.0 * m / (2.0 - p), 1.0 / (1.0 + p));
      v.require(std::abs(c - root) <= 1e-8 * root, "p=" + num(p) + " m=" + num(m) + " norm " + num(c));
      v.require(modular_value(t, f.scaled(1.0 / c)) <= c * (1.0 + 1e-12), "root inequality at p=" + num(p));
    }
  }
  expect_reports(v, {"modular.fnorm_root"});
  return v;
}

Verdict partition_criterion() {
  Verdict v;
  const DomainPtr d = cells(1);
  const double lambda = 1.0;
  const auto depths = partition_sums(families::poisson(d, lambda), {0}, 20);
  double worst = 0.0;
  for (const PartitionDepth& pd : depths) {
    const double n = std::ldexp(1.0, static_cast<int>(pd.depth));
    const double expect = -n * std::expm1(-lambda / n);
    worst = std::max(worst, std::abs(pd.tau_sum - expect) / expect);
  }
  v.require(worst <= 1e-12, "per-depth formula error " + num(worst));
  v.require(std::abs(depths.back().tau_sum - lambda) <= 1e-6, "m=20 limit gap " + num(depths.back().tau_sum - lambda));
  expect_reports(v, {"partition_limit.poisson", "partition_limit.gaussian"});
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism_criterion() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "levybasis_acceptance";
  fs::remove_all(root);
  struct Invocation {
    std::string dir;
    unsigned workers;
  };
  const std::vector<Invocation> runs{{"a", 1}, {"b", 1}, {"c", 4}};
  std::vector<std::string> csv, json, out;
  for (const Invocation& inv : runs) {
    const fs::path dir = root / inv.dir;
    fs::create_directories(dir);
    const std::string cmd = std::string("\"") + LEVYBASIS_CLI + "\" verify --all --seed 7 --workers " +
                            std::to_string(inv.workers) + " --out \"" + dir.string() + "\" > \"" +
                            (dir / "stdout.txt").string() + "\" 2> /dev/null";
    const auto t0 = Clock::now();
    const int raw = std::system(cmd.c_str());
    const double t = seconds_since(t0);
    v.require(WIFEXITED(raw) && WEXITSTATUS(raw) == 0, "run " + inv.dir + " exit status " + std::to_string(raw));
    v.require(t < 300.0, "run " + inv.dir + " took " + num(t) + " s");
    if (inv.dir == "a") v.note("full run " + num(t) + " s");
    csv.push_back(slurp(dir / "verify.csv"));
    json.push_back(slurp(dir / "verify.json"));
    out.push_back(slurp(dir / "stdout.txt"));
  }
  v.require(!csv[0].empty() && !json[0].empty(), "missing artifacts");
  for (std::size_t i = 1; i < runs.size(); ++i) {
    v.require(csv[i] == csv[0], "verify.csv differs in run " + runs[i].dir);
    v.require(json[i] == json[0], "verify.json differs in run " + runs[i].dir);
    v.require(out[i] == out[0], "stdout differs in run " + runs[i].dir);
  }
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 closed-form modular reproduction", closed_form_criterion},
      {"2 compensated Poisson eta identity",
       [] {
         Verdict v;
         const CharacteristicTriplet t = families::compensated_poisson(cells(1), 1.0);
         double worst = 0.0;
         for (int j = 0; j < 1000; ++j) {
           const double alpha = -10.0 + 20.0 * j / 999.0;
           worst = std::max(worst, std::abs(eta_theta(t, 0, alpha) - std::max(std::abs(alpha) - 1.0, 0.0)));
         }
         v.require(worst <= 1e-10, "abs error " + num(worst));
         expect_reports(v, {"modular.eta_identity"});
         return v;
       }},
      {"3 F-norm root", fnorm_criterion},
      {"4 doubling property suite", [] {
         Verdict v;
         expect_reports(v, {"modular.delta2"});
         return v;
       }},
      {"5 CF matching", [] {
         Verdict v;
         double t = 0.0;
         expect_reports(v,
                        {"cf_match.poisson", "cf_match.comp_poisson", "cf_match.gaussian", "cf_match.stable_0.5",
                         "cf_match.stable_1.5", "cf_match.stable_exact_1.5"},
                        &t);
         v.require(t < 60.0, "runtime " + num(t) + " s");
         v.note("runtime " + num(t) + " s");
         return v;
       }},
      {"6 integral law", [] {
         Verdict v;
         expect_reports(v, {"integral_law.mixed"});
         return v;
       }},
      {"7 sum control", [] {
         Verdict v;
         expect_reports(v, {"sum_control.exact"});
         return v;
       }},
      {"8 tangency and decoupling", [] {
         Verdict v;
         expect_reports(v, {"tangency.exact", "decoupling.exact", "decoupling.mc"});
         return v;
       }},
      {"9 maximal inequality", [] {
         Verdict v;
         expect_reports(v, {"maximal.exact", "maximal.mc"});
         return v;
       }},
      {"10 partition limits", partition_criterion},
      {"11 dominated convergence", [] {
         Verdict v;
         expect_reports(v, {"dominated_convergence.scale", "dominated_convergence.truncate_bounded",
                            "dominated_convergence.truncate_unbounded"});
         return v;
       }},
      {"12 determinism", determinism_criterion},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("%s criterion %s: %s\n", v.pass ? "PASS" : "FAIL", c.label, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
