#include "levybasis/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "levybasis/verify.hpp"

namespace levybasis {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path.empty() ? "<document>" : path, "must be an object");
}

void check_keys(const json& node, const std::string& path, const std::set<std::string>& allowed) {
  check_object(node, path);
  for (const auto& [key, value] : node.items())
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown field");
}

const json& require(const json& node, const std::string& key, const std::string& path) {
  if (!node.contains(key)) throw ConfigError(join(path, key), "required field is missing");
  return node.at(key);
}

double number(const json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError(path, "must be a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double number_or(const json& node, const std::string& key, const std::string& path, double fallback) {
  return node.contains(key) ? number(node.at(key), join(path, key)) : fallback;
}

std::uint64_t unsigned_integer(const json& node, const std::string& path) {
  if (node.is_number_unsigned()) return node.get<std::uint64_t>();
  if (node.is_number_integer()) {
    if (node.get<std::int64_t>() < 0) throw ConfigError(path, "must be nonnegative");
    return static_cast<std::uint64_t>(node.get<std::int64_t>());
  }
  throw ConfigError(path, "must be a nonnegative integer");
}

std::vector<double> number_array(const json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], at(path, i)));
  return out;
}

template <class Fn>
auto wrap(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(path, e.what());
  }
}

DomainPtr parse_domain(const json& doc) {
  if (!doc.contains("domain")) return std::make_shared<const Domain>(Domain::uniform_time(1.0, 1));
  const json& node = doc.at("domain");
  const std::string path = "domain";
  check_keys(node, path, {"time_grid", "horizon", "intervals", "space_boxes"});
  std::vector<double> grid;
  if (node.contains("time_grid")) {
    if (node.contains("horizon") || node.contains("intervals"))
      throw ConfigError(join(path, "time_grid"), "give either time_grid or horizon/intervals");
    grid = number_array(node.at("time_grid"), join(path, "time_grid"));
  } else {
    const double horizon = number(require(node, "horizon", path), join(path, "horizon"));
    const std::uint64_t n = unsigned_integer(require(node, "intervals", path), join(path, "intervals"));
    if (n == 0) throw ConfigError(join(path, "intervals"), "must be positive");
    if (!(horizon > 0.0)) throw ConfigError(join(path, "horizon"), "must be positive");
    for (std::uint64_t i = 0; i <= n; ++i) grid.push_back(horizon * static_cast<double>(i) / static_cast<double>(n));
  }
  std::vector<Box> boxes;
  if (node.contains("space_boxes")) {
    const json& list = node.at("space_boxes");
    const std::string bp = join(path, "space_boxes");
    if (!list.is_array() || list.empty()) throw ConfigError(bp, "must be a nonempty array");
    for (std::size_t b = 0; b < list.size(); ++b) {
      check_keys(list[b], at(bp, b), {"lower", "upper"});
      boxes.push_back(Box{number_array(require(list[b], "lower", at(bp, b)), join(at(bp, b), "lower")),
                          number_array(require(list[b], "upper", at(bp, b)), join(at(bp, b), "upper"))});
    }
  } else {
    boxes.push_back(Box{{0.0}, {1.0}});
  }
  return wrap(path, [&] { return std::make_shared<const Domain>(grid, boxes); });
}

TabulatedSide parse_side(const json& node, const std::string& path) {
  check_keys(node, path, {"magnitude", "density"});
  return TabulatedSide{number_array(require(node, "magnitude", path), join(path, "magnitude")),
                       number_array(require(node, "density", path), join(path, "density"))};
}

CellLaw parse_law(const json& node, const std::string& path) {
  check_keys(node, path, {"a", "q", "kernel"});
  CellLaw law;
  law.a = number_or(node, "a", path, 0.0);
  law.q = number_or(node, "q", path, 0.0);
  if (law.q < 0.0) throw ConfigError(join(path, "q"), "must be >= 0");
  law.kernel = std::make_shared<const LevyKernel>(node.contains("kernel")
                                                      ? parse_kernel(node.at("kernel"), join(path, "kernel"))
                                                      : LevyKernel::zero());
  return law;
}

std::vector<double> parse_control(const json& doc, const Domain& d) {
  if (!doc.contains("control_density")) return std::vector<double>(d.cell_count(), 1.0);
  const json& node = doc.at("control_density");
  std::vector<double> density;
  if (node.is_number()) {
    density.assign(d.cell_count(), number(node, "control_density"));
  } else {
    density = number_array(node, "control_density");
    if (density.size() != d.cell_count())
      throw ConfigError("control_density", "expected " + std::to_string(d.cell_count()) + " values, one per cell");
  }
  for (std::size_t c = 0; c < density.size(); ++c)
    if (density[c] < 0.0) throw ConfigError(node.is_number() ? "control_density" : at("control_density", c), "must be >= 0");
  return density;
}

void parse_triplet(const json& doc, RunConfig& cfg) {
  if (!doc.contains("triplet")) return;
  const json& node = doc.at("triplet");
  const std::string path = "triplet";
  check_object(node, path);
  const DomainPtr d = cfg.domain;
  if (node.contains("family")) {
    check_keys(node, path, {"family", "intensity", "chi_density", "q", "p", "x", "y", "rho"});
    const json& fam = node.at("family");
    if (!fam.is_string()) throw ConfigError(join(path, "family"), "must be a string");
    const std::string name = fam.get<std::string>();
    if (name == "gaussian") {
      const double chi = number_or(node, "chi_density", path, 1.0);
      const double q = number_or(node, "q", path, 1.0);
      if (q < 0.0) throw ConfigError(join(path, "q"), "must be >= 0");
      if (chi < 0.0) throw ConfigError(join(path, "chi_density"), "must be >= 0");
      cfg.triplet = wrap(path, [&] { return families::gaussian(d, chi, q); });
      return;
    }
    const ExampleFamily family = wrap(join(path, "family"), [&] { return parse_family(name); });
    cfg.family = family;
    switch (family) {
      case ExampleFamily::poisson:
      case ExampleFamily::compensated_poisson: {
        const double lambda = number(require(node, "intensity", path), join(path, "intensity"));
        if (lambda < 0.0) throw ConfigError(join(path, "intensity"), "must be >= 0");
        cfg.triplet = wrap(path, [&] {
          return family == ExampleFamily::poisson ? families::poisson(d, lambda) : families::compensated_poisson(d, lambda);
        });
        return;
      }
      case ExampleFamily::stable: {
        const double p = number(require(node, "p", path), join(path, "p"));
        const double x = number_or(node, "x", path, 0.5);
        const double y = number_or(node, "y", path, 1.0 - x);
        const double rho = number_or(node, "rho", path, 1.0);
        if (!(p > 0.0 && p < 2.0) || p == 1.0) throw ConfigError(join(path, "p"), "must lie in (0, 2) without 1");
        if (x < 0.0) throw ConfigError(join(path, "x"), "must be >= 0");
        if (y < 0.0) throw ConfigError(join(path, "y"), "must be >= 0");
        if (std::abs(x + y - 1.0) > 1e-12) throw ConfigError(join(path, "y"), "x + y must equal 1");
        if (rho < 0.0) throw ConfigError(join(path, "rho"), "must be >= 0");
        cfg.triplet = wrap(path, [&] { return families::stable(d, p, x, y, rho); });
        return;
      }
    }
  }
  check_keys(node, path, {"default", "cells"});
  const CellLaw fallback = node.contains("default") ? parse_law(node.at("default"), join(path, "default")) : CellLaw{
      0.0, 0.0, std::make_shared<const LevyKernel>(LevyKernel::zero())};
  std::vector<CellLaw> cells(d->cell_count(), fallback);
  if (node.contains("cells")) {
    const json& overrides = node.at("cells");
    const std::string cp = join(path, "cells");
    check_object(overrides, cp);
    for (const auto& [key, value] : overrides.items()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError(join(cp, key), "cell keys must be decimal cell indices");
      }
      if (idx >= cells.size()) throw ConfigError(join(cp, key), "cell index out of range");
      cells[idx] = parse_law(value, join(cp, key));
    }
  }
  const std::vector<double> density = parse_control(doc, *d);
  cfg.triplet = wrap(path, [&] { return CharacteristicTriplet(d, ControlMeasure(*d, density), cells); });
}

void parse_integrand(const json& doc, RunConfig& cfg) {
  if (!doc.contains("integrand")) return;
  const json& node = doc.at("integrand");
  const std::string path = "integrand";
  check_keys(node, path, {"values", "constant", "indicator", "value"});
  const DomainPtr d = cfg.domain;
  if (node.contains("values")) {
    std::vector<double> v = number_array(node.at("values"), join(path, "values"));
    if (v.size() != d->cell_count())
      throw ConfigError(join(path, "values"), "expected " + std::to_string(d->cell_count()) + " values, one per cell");
    cfg.integrand = GridFunction(d, std::move(v));
  } else if (node.contains("constant")) {
    cfg.integrand = GridFunction::constant(d, number(node.at("constant"), join(path, "constant")));
  } else if (node.contains("indicator")) {
    const json& list = node.at("indicator");
    const std::string ip = join(path, "indicator");
    if (!list.is_array()) throw ConfigError(ip, "must be an array of cell indices");
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < list.size(); ++i) cells.push_back(unsigned_integer(list[i], at(ip, i)));
    const double value = number_or(node, "value", path, 1.0);
    cfg.integrand = wrap(ip, [&] { return GridFunction::indicator(d, make_cell_set(*d, cells), value); });
  } else {
    throw ConfigError(path, "needs one of values, constant, indicator");
  }
}

void parse_strategy(const json& doc, RunConfig& cfg) {
  if (!doc.contains("strategy")) return;
  const json& node = doc.at("strategy");
  const std::string path = "strategy";
  check_keys(node, path, {"rule", "blocks"});
  if (node.contains("rule")) {
    if (node.contains("blocks")) throw ConfigError(path, "give either rule or blocks");
    const CoefficientRule rule = parse_rule(node.at("rule"), join(path, "rule"));
    cfg.strategy = StepStrategy::uniform(cfg.domain, rule);
    return;
  }
  const json& list = require(node, "blocks", path);
  const std::string bp = join(path, "blocks");
  if (!list.is_array()) throw ConfigError(bp, "must be an array");
  std::vector<StrategyBlock> blocks;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = at(bp, k);
    check_keys(list[k], p, {"time_index", "terms"});
    StrategyBlock block{unsigned_integer(require(list[k], "time_index", p), join(p, "time_index")), {}};
    const json& terms = require(list[k], "terms", p);
    if (!terms.is_array()) throw ConfigError(join(p, "terms"), "must be an array");
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const std::string tp = at(join(p, "terms"), j);
      check_keys(terms[j], tp, {"box", "rule"});
      block.terms.push_back({unsigned_integer(require(terms[j], "box", tp), join(tp, "box")),
                             parse_rule(require(terms[j], "rule", tp), join(tp, "rule"))});
    }
    blocks.push_back(std::move(block));
  }
  cfg.strategy = wrap(bp, [&] { return StepStrategy(cfg.domain, std::move(blocks)); });
}

}  // namespace

LevyKernel parse_kernel(const json& node, const std::string& path) {
  check_object(node, path);
  const json& type = require(node, "type", path);
  if (!type.is_string()) throw ConfigError(join(path, "type"), "must be a string");
  const std::string t = type.get<std::string>();
  if (t == "zero") {
    check_keys(node, path, {"type"});
    return LevyKernel::zero();
  }
  if (t == "atoms") {
    check_keys(node, path, {"type", "atoms"});
    const json& list = require(node, "atoms", path);
    const std::string ap = join(path, "atoms");
    if (!list.is_array()) throw ConfigError(ap, "must be an array");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < list.size(); ++i) {
      check_keys(list[i], at(ap, i), {"location", "weight"});
      const double loc = number(require(list[i], "location", at(ap, i)), join(at(ap, i), "location"));
      const double w = number(require(list[i], "weight", at(ap, i)), join(at(ap, i), "weight"));
      if (loc == 0.0) throw ConfigError(join(at(ap, i), "location"), "must be nonzero");
      if (w < 0.0) throw ConfigError(join(at(ap, i), "weight"), "must be >= 0");
      atoms.push_back({loc, w});
    }
    return wrap(path, [&] { return LevyKernel::atoms(std::move(atoms)); });
  }
  if (t == "stable") {
    check_keys(node, path, {"type", "p", "x", "y"});
    const double p = number(require(node, "p", path), join(path, "p"));
    const double x = number_or(node, "x", path, 0.5);
    const double y = number_or(node, "y", path, 1.0 - x);
    return wrap(path, [&] { return LevyKernel::stable(p, x, y); });
  }
  if (t == "tabulated") {
    check_keys(node, path, {"type", "positive", "negative", "small_exponent", "large_exponent"});
    const TabulatedSide pos = node.contains("positive") ? parse_side(node.at("positive"), join(path, "positive"))
                                                        : TabulatedSide{};
    const TabulatedSide neg = node.contains("negative") ? parse_side(node.at("negative"), join(path, "negative"))
                                                        : TabulatedSide{};
    const double small = number(require(node, "small_exponent", path), join(path, "small_exponent"));
    const double large = number(require(node, "large_exponent", path), join(path, "large_exponent"));
    return wrap(path, [&] { return LevyKernel::tabulated(pos, neg, small, large); });
  }
  throw ConfigError(join(path, "type"), "unknown kernel type '" + t + "'");
}

CoefficientRule parse_rule(const json& node, const std::string& path) {
  if (node.is_number()) return rules::constant(number(node, path));
  check_object(node, path);
  const json& type = require(node, "type", path);
  if (!type.is_string()) throw ConfigError(join(path, "type"), "must be a string");
  const std::string t = type.get<std::string>();
  if (t == "constant") {
    check_keys(node, path, {"type", "value"});
    return rules::constant(number(require(node, "value", path), join(path, "value")));
  }
  if (t == "sign_of_past_sum") {
    check_keys(node, path, {"type", "scale"});
    return rules::sign_of_past_sum(number_or(node, "scale", path, 1.0));
  }
  if (t == "threshold") {
    check_keys(node, path, {"type", "value", "level"});
    const double level = number(require(node, "level", path), join(path, "level"));
    if (!(level > 0.0)) throw ConfigError(join(path, "level"), "must be positive");
    return rules::threshold(number(require(node, "value", path), join(path, "value")), level);
  }
  throw ConfigError(join(path, "type"), "unknown rule type '" + t + "'");
}

RunConfig parse_config(const json& doc) {
  check_keys(doc, "", {"domain", "control_density", "triplet", "integrand", "strategy", "seed", "sampler",
                       "replicates", "tolerances", "experiments", "output", "workers"});
  RunConfig cfg;
  cfg.domain = parse_domain(doc);
  if (doc.contains("control_density")) (void)parse_control(doc, *cfg.domain);
  parse_triplet(doc, cfg);
  parse_integrand(doc, cfg);
  parse_strategy(doc, cfg);
  if (doc.contains("seed")) cfg.seed = unsigned_integer(doc.at("seed"), "seed");
  if (doc.contains("sampler")) {
    const json& node = doc.at("sampler");
    check_keys(node, "sampler", {"epsilon", "max_expected_jumps"});
    cfg.sampler.epsilon = number_or(node, "epsilon", "sampler", cfg.sampler.epsilon);
    cfg.sampler.max_expected_jumps = number_or(node, "max_expected_jumps", "sampler", cfg.sampler.max_expected_jumps);
    if (!(cfg.sampler.epsilon > 0.0 && cfg.sampler.epsilon <= 1.0))
      throw ConfigError("sampler.epsilon", "must lie in (0, 1]");
    if (!(cfg.sampler.max_expected_jumps > 0.0)) throw ConfigError("sampler.max_expected_jumps", "must be positive");
  }
  if (doc.contains("replicates")) {
    cfg.replicates = unsigned_integer(doc.at("replicates"), "replicates");
    if (cfg.replicates == 0) throw ConfigError("replicates", "must be positive");
  }
  if (doc.contains("tolerances")) {
    const json& node = doc.at("tolerances");
    check_keys(node, "tolerances", {"scale"});
    cfg.tolerance_scale = number_or(node, "scale", "tolerances", 1.0);
    if (!(cfg.tolerance_scale > 0.0)) throw ConfigError("tolerances.scale", "must be positive");
  }
  if (doc.contains("experiments")) {
    const json& node = doc.at("experiments");
    const std::vector<std::string> known = experiment_names();
    if (node.is_string() && node.get<std::string>() == "all") {
      cfg.experiments = known;
    } else if (node.is_array()) {
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_string()) throw ConfigError(at("experiments", i), "must be a string");
        const std::string name = node[i].get<std::string>();
        if (std::find(known.begin(), known.end(), name) == known.end())
          throw ConfigError(at("experiments", i), "unknown experiment '" + name + "'");
        cfg.experiments.push_back(name);
      }
    } else {
      throw ConfigError("experiments", "must be \"all\" or an array of experiment names");
    }
  }
  if (doc.contains("output")) {
    const json& node = doc.at("output");
    check_keys(node, "output", {"dir"});
    const json& dir = require(node, "dir", "output");
    if (!dir.is_string() || dir.get<std::string>().empty()) throw ConfigError("output.dir", "must be a nonempty string");
    cfg.output_dir = dir.get<std::string>();
  }
  if (doc.contains("workers")) {
    const std::uint64_t w = unsigned_integer(doc.at("workers"), "workers");
    if (w == 0 || w > 256) throw ConfigError("workers", "must lie in [1, 256]");
    cfg.workers = static_cast<unsigned>(w);
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  return parse_config(doc);
}

}  // namespace levybasis
