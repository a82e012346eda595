#include "levybasis/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <tuple>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levybasis/families.hpp"
#include "levybasis/parallel.hpp"
#include "levybasis/truncation.hpp"

namespace levybasis {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Standard error of the mean of v.
double std_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

/// Uniform draws for building random fixtures.
class FixtureRng {
 public:
  explicit FixtureRng(const RngKey& key) : stream_(key) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * stream_.uniform(); }
  std::size_t index(std::size_t n) { return std::min<std::size_t>(n - 1, static_cast<std::size_t>(stream_.uniform() * n)); }
  bool coin(double p = 0.5) { return stream_.uniform() < p; }

 private:
  RngStream stream_;
};

DomainPtr time_domain(std::size_t intervals) {
  return std::make_shared<const Domain>(Domain::uniform_time(1.0, intervals));
}

RngKey experiment_key(const VerifyOptions& options, std::uint32_t component) {
  return RngKey{options.seed, component, 0, 0};
}

}  // namespace

double ExperimentReport::stat(const std::string& key) const {
  for (const auto& [k, v] : stats)
    if (k == key) return v;
  throw std::out_of_range("ExperimentReport '" + name + "' has no statistic '" + key + "'");
}

void ExperimentReport::add_param(const std::string& key, double value) { params.emplace_back(key, fmt(value)); }

void ExperimentReport::check(bool ok, const std::string& what) {
  if (ok) return;
  ++failed_checks;
  if (!note.empty()) note += "; ";
  note += what;
}

void ExperimentReport::finish() { pass = statistic <= tolerance && failed_checks == 0; }

std::vector<double> default_u_grid() {
  std::vector<double> u(20);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = -5.0 + 10.0 * static_cast<double>(k) / 19.0;
  return u;
}

std::complex<double> empirical_cf(const std::vector<double>& draws, double u) {
  double re = 0.0;
  double im = 0.0;
  for (double x : draws) {
    re += std::cos(u * x);
    im += std::sin(u * x);
  }
  const double n = static_cast<double>(draws.size());
  return {re / n, im / n};
}

namespace {

/// max_u (|phi_hat - phi| - bias(u)) against 4 / sqrt(N).
void compare_cf(ExperimentReport& r, const std::vector<double>& draws, const std::vector<double>& u_grid,
                const std::function<std::optional<std::complex<double>>(double)>& target,
                const std::function<double(double)>& bias, const VerifyOptions& options) {
  double worst = -kInfinity;
  double max_dev = 0.0;
  double max_bias = 0.0;
  bool divergent = false;
  for (double u : u_grid) {
    const auto phi = target(u);
    if (!phi) {
      divergent = true;
      continue;
    }
    const double dev = std::abs(empirical_cf(draws, u) - *phi);
    const double b = bias(u);
    max_dev = std::max(max_dev, dev);
    max_bias = std::max(max_bias, b);
    worst = std::max(worst, dev - b);
  }
  r.check(!divergent, "target characteristic function diverges");
  const double n = static_cast<double>(draws.size());
  r.statistic = u_grid.empty() ? 0.0 : worst;
  r.tolerance = options.tolerance_scale * 4.0 / std::sqrt(n);
  r.add_stat("max_deviation", max_dev);
  r.add_stat("max_bias_budget", max_bias);
  r.add_stat("band", r.tolerance);
  r.finish();
}

}  // namespace

ExperimentReport cf_match(const std::string& name, const CharacteristicTriplet& triplet, const CellSet& cells,
                          std::size_t replicates, const std::vector<double>& u_grid, const VerifyOptions& options) {
  if (replicates < 10000) throw std::invalid_argument("cf_match: need at least 1e4 replicates");
  ExperimentReport r;
  r.name = name;
  r.add_param("replicates", static_cast<double>(replicates));
  r.add_param("u_points", static_cast<double>(u_grid.size()));
  r.add_param("epsilon", options.sampler.epsilon);
  const IncrementSampler sampler(triplet, options.sampler);
  const RngKey key = experiment_key(options, kFirstUserComponent);
  const std::vector<double> draws = parallel_map<double>(replicates, options.workers, [&](std::size_t i) {
    const RngKey k = key.with_replicate(i);
    double s = 0.0;
    for (std::size_t c : cells) s += sampler.sample(c, k);
    return s;
  });
  compare_cf(
      r, draws, u_grid, [&](double u) { return levy_khintchine_cf(triplet, cells, u); },
      [&](double u) { return sampler.bias_budget(cells, u); }, options);
  return r;
}

ExperimentReport cf_match_stable_exact(const std::string& name, const CharacteristicTriplet& triplet, std::size_t cell,
                                       std::size_t replicates, const std::vector<double>& u_grid,
                                       const VerifyOptions& options) {
  if (replicates < 10000) throw std::invalid_argument("cf_match_stable_exact: need at least 1e4 replicates");
  ExperimentReport r;
  r.name = name;
  r.add_param("replicates", static_cast<double>(replicates));
  r.add_param("sampler", "chambers_mallows_stuck");
  const RngKey key = experiment_key(options, kFirstUserComponent + 1);
  const std::vector<double> draws = parallel_map<double>(
      replicates, options.workers, [&](std::size_t i) { return sample_stable_exact(triplet, cell, key.with_replicate(i)); });
  const CellSet cells{cell};
  compare_cf(
      r, draws, u_grid, [&](double u) { return levy_khintchine_cf(triplet, cells, u); }, [](double) { return 0.0; },
      options);
  return r;
}

ExperimentReport integral_law_check(const std::string& name, const CharacteristicTriplet& triplet, const GridFunction& f,
                                    std::size_t replicates, const std::vector<double>& u_grid,
                                    const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.add_param("replicates", static_cast<double>(replicates));
  r.add_param("cells", static_cast<double>(f.size()));
  const IntegralLaw law = integral_law(f, triplet);
  r.add_stat("a_I", law.a());
  r.add_stat("q_I", law.q());
  r.add_stat("zeta_functional", law.zeta_functional());
  r.check(!law.infinite(), "integrand has infinite modular");
  const IncrementSampler sampler(triplet, options.sampler);
  const RngKey key = experiment_key(options, kFirstUserComponent + 2);
  const std::vector<double> draws = parallel_map<double>(replicates, options.workers, [&](std::size_t i) {
    return integrate_simple(f, sample_field(sampler, key.with_replicate(i)));
  });
  double identity_gap = 0.0;
  for (double u : u_grid) {
    const auto a = law.cf(u);
    const auto b = law.cf_direct(u);
    if (a && b) identity_gap = std::max(identity_gap, std::abs(*a - *b));
  }
  r.add_stat("characteristics_identity_gap", identity_gap);
  r.check(identity_gap <= 1e-9, "CF from (a_I, q_I, jumps) disagrees with the cellwise CF");
  compare_cf(
      r, draws, u_grid, [&](double u) { return law.cf(u); },
      [&](double u) {
        double b = 0.0;
        for (std::size_t c = 0; c < f.size(); ++c)
          if (f[c] != 0.0) b += sampler.plan(c).bias_budget(u * f[c]);
        return b;
      },
      options);
  return r;
}

ExperimentReport sum_control_check(const std::string& name, const std::vector<std::vector<ToyLaw>>& tuples) {
  ExperimentReport r;
  r.name = name;
  r.add_param("tuples", static_cast<double>(tuples.size()));
  double failures = 0.0;
  double worst_ratio = 0.0;
  for (const auto& laws : tuples) {
    const SumControlExact s = sum_control_exact(laws);
    if (!s.holds) failures += 1.0;
    if (s.rhs_value > 0.0) worst_ratio = std::max(worst_ratio, s.lhs_value / s.rhs_value);
  }
  r.add_stat("max_lhs_over_rhs", worst_ratio);
  r.statistic = failures;
  r.tolerance = 0.0;
  r.finish();
  return r;
}

std::vector<std::vector<ToyLaw>> random_toy_tuples(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  FixtureRng rng(RngKey{seed, kFirstUserComponent + 3, 0, 0});
  std::vector<std::vector<ToyLaw>> out;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = 1 + rng.index(max_n);
    std::vector<ToyLaw> laws;
    for (std::size_t k = 0; k < n; ++k) {
      ToyLaw law;
      law.scale = static_cast<std::int64_t>(1 + rng.index(4));
      const std::size_t atoms = 1 + rng.index(3);
      for (std::size_t j = 0; j < atoms; ++j) {
        law.values.push_back(static_cast<std::int64_t>(rng.index(13)) - 6);
        law.weights.push_back(static_cast<std::int64_t>(1 + rng.index(5)));
      }
      laws.push_back(std::move(law));
    }
    out.push_back(std::move(laws));
  }
  return out;
}

ExperimentReport drift_sup_check(const std::string& name, const CharacteristicTriplet& triplet, const GridFunction& f,
                                 const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.add_param("cells", static_cast<double>(f.size()));
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double chi = triplet.control().mass(c);
    if (chi == 0.0) continue;
    const double alpha = std::abs(f[c]);
    lhs += chi * eta_theta_search(triplet, c, alpha).value;
    const double b = eta_theta_sup(triplet, c, alpha).argmax;
    const double up = a_theta(triplet, c, b * f[c]);
    const double down = a_theta(triplet, c, -b * f[c]);
    rhs += chi * std::max(up, down);
  }
  r.add_stat("lhs_search", lhs);
  r.add_stat("rhs_optimal_gamma", rhs);
  r.statistic = std::abs(lhs - rhs);
  r.tolerance = 1e-8 * options.tolerance_scale;
  r.finish();
  return r;
}

namespace {

double tau_sq(double x) {
  const double t = tau(x);
  return t * t;
}

PartitionDepth atom_partition_depth(double mass, double a, const Atom& atom, unsigned m) {
  const double part = mass / std::ldexp(1.0, static_cast<int>(m));
  const double rate = part * atom.weight;
  const double shift = part * (a - atom.weight * tau(atom.location));
  double e_tau = 0.0;
  double e_sq = 0.0;
  if (rate == 0.0) {
    e_tau = tau(shift);
    e_sq = tau_sq(shift);
  } else {
    const double log_rate = std::log(rate);
    const auto k_max = static_cast<long long>(rate + 40.0 * std::sqrt(rate) + 60.0);
    for (long long k = 0; k <= k_max; ++k) {
      const double kd = static_cast<double>(k);
      const double pmf = std::exp(-rate + kd * log_rate - std::lgamma(kd + 1.0));
      const double d = shift + kd * atom.location;
      e_tau += pmf * tau(d);
      e_sq += pmf * tau_sq(d);
    }
  }
  const double parts = std::ldexp(1.0, static_cast<int>(m));
  return {m, parts * e_tau, parts * e_sq};
}

PartitionDepth gaussian_partition_depth(double mean_total, double variance_total, unsigned m) {
  const double parts = std::ldexp(1.0, static_cast<int>(m));
  const double mu = mean_total / parts;
  const double sigma = std::sqrt(variance_total / parts);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto integrate = [&](auto g) {
    if (sigma == 0.0) return g(mu);
    std::vector<double> cuts{-40.0, 40.0};
    for (double edge : {-1.0, 1.0}) {
      const double z = (edge - mu) / sigma;
      if (z > -40.0 && z < 40.0) cuts.push_back(z);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      total += GK::integrate(
          [&](double z) { return g(mu + sigma * z) * inv_sqrt_2pi * std::exp(-0.5 * z * z); }, cuts[i], cuts[i + 1],
          15, 1e-14);
    return total;
  };
  const double e_tau = integrate([](double d) { return tau(d); });
  const double e_sq = integrate([](double d) { return tau_sq(d); });
  return {m, parts * e_tau, parts * e_sq};
}

}  // namespace

std::vector<PartitionDepth> partition_sums(const CharacteristicTriplet& triplet, const CellSet& cells,
                                           unsigned max_depth) {
  if (cells.empty()) throw std::invalid_argument("partition_sums: empty cell set");
  if (max_depth > 60) throw std::invalid_argument("partition_sums: depth above 60");
  const CellLaw& first = triplet.cell(cells.front());
  double mass = 0.0;
  for (std::size_t c : cells) {
    const CellLaw& law = triplet.cell(c);
    if (law.a != first.a || law.q != first.q || !(*law.kernel == *first.kernel))
      throw std::invalid_argument("partition_sums: cells must share one law");
    mass += triplet.control().mass(c);
  }
  std::vector<PartitionDepth> out;
  if (first.kernel->is_zero()) {
    for (unsigned m = 0; m <= max_depth; ++m)
      out.push_back(gaussian_partition_depth(mass * first.a, mass * first.q, m));
    return out;
  }
  if (first.kernel->family() != LevyKernel::Family::atoms || first.kernel->atom_list().size() != 1 || first.q != 0.0)
    throw std::invalid_argument("partition_sums: need a single-atom kernel without Gaussian part, or no jumps");
  for (unsigned m = 0; m <= max_depth; ++m)
    out.push_back(atom_partition_depth(mass, first.a, first.kernel->atom_list().front(), m));
  return out;
}

ExperimentReport partition_limit_report(const std::string& name, const CharacteristicTriplet& triplet,
                                        const CellSet& cells, unsigned max_depth, std::size_t replicates,
                                        double tolerance, const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.add_param("max_depth", static_cast<double>(max_depth));
  r.add_param("replicates", static_cast<double>(replicates));
  const std::vector<PartitionDepth> depths = partition_sums(triplet, cells, max_depth);
  double tau_target = 0.0;
  double sq_target = 0.0;
  for (std::size_t c : cells) {
    const double chi = triplet.control().mass(c);
    tau_target += chi * triplet.drift_density(c);
    sq_target += chi * (triplet.kernel_second_moment(c) + triplet.gaussian_density(c));
  }
  r.add_stat("tau_target", tau_target);
  r.add_stat("tau_sq_target", sq_target);
  r.add_stat("tau_sum_depth0", depths.front().tau_sum);
  r.add_stat("tau_sq_sum_depth0", depths.front().tau_sq_sum);
  r.add_stat("tau_sum_deepest", depths.back().tau_sum);
  r.add_stat("tau_sq_sum_deepest", depths.back().tau_sq_sum);

  double previous = kInfinity;
  bool monotone = true;
  for (const PartitionDepth& d : depths) {
    const double err = std::max(std::abs(d.tau_sum - tau_target), std::abs(d.tau_sq_sum - sq_target));
    if (err > previous + 1e-10) monotone = false;
    previous = err;
  }
  r.check(monotone, "limit error increases with depth");

  // Monte Carlo cross-check of the shallow depths through convolution roots.
  const unsigned mc_depth = std::min(max_depth, 4U);
  const RngKey key = experiment_key(options, kFirstUserComponent + 4);
  double worst_z = 0.0;
  for (unsigned m = 0; m <= mc_depth; ++m) {
    const auto sums = parallel_map<std::pair<double, double>>(replicates, options.workers, [&](std::size_t i) {
      const std::vector<double> roots =
          convolution_root_field(triplet, cells, m, key.with_replicate(i).with_component(key.component + m),
                                 options.sampler);
      double t = 0.0;
      double s = 0.0;
      for (double d : roots) {
        t += tau(d);
        s += tau_sq(d);
      }
      return std::make_pair(t, s);
    });
    std::vector<double> t(sums.size());
    std::vector<double> s(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) std::tie(t[i], s[i]) = sums[i];
    const double zt = std::abs(mean_of(t) - depths[m].tau_sum) / std::max(std_error(t), 1e-300);
    const double zs = std::abs(mean_of(s) - depths[m].tau_sq_sum) / std::max(std_error(s), 1e-300);
    const double z_t = std_error(t) == 0.0 ? (std::abs(mean_of(t) - depths[m].tau_sum) < 1e-12 ? 0.0 : kInfinity) : zt;
    const double z_s = std_error(s) == 0.0 ? (std::abs(mean_of(s) - depths[m].tau_sq_sum) < 1e-12 ? 0.0 : kInfinity) : zs;
    worst_z = std::max({worst_z, z_t, z_s});
  }
  r.add_stat("mc_max_standardized_gap", worst_z);
  r.check(worst_z <= 4.0 * options.tolerance_scale, "convolution-root Monte Carlo outside 4 standard errors");

  r.statistic = std::max(std::abs(depths.back().tau_sum - tau_target), std::abs(depths.back().tau_sq_sum - sq_target));
  r.tolerance = tolerance * options.tolerance_scale;
  r.finish();
  return r;
}

ExperimentReport tangency_exact_report(const std::string& name, const std::vector<ToyCase>& toys) {
  ExperimentReport r;
  r.name = name;
  r.add_param("toys", static_cast<double>(toys.size()));
  double failures = 0.0;
  for (const ToyCase& t : toys) {
    const TangencyExact e = tangency_exact(t.strategy, t.toy);
    r.add_stat(t.label + ".conditions", static_cast<double>(e.conditions_checked));
    if (!e.equal) {
      failures += 1.0;
      r.check(false, t.label + ": conditional laws differ at " + e.mismatch);
    }
  }
  r.statistic = failures;
  r.tolerance = 0.0;
  r.finish();
  return r;
}

ExperimentReport decoupling_exact_report(const std::string& name, const std::vector<ToyCase>& toys) {
  ExperimentReport r;
  r.name = name;
  r.add_param("toys", static_cast<double>(toys.size()));
  double failures = 0.0;
  for (const ToyCase& t : toys) {
    const DecouplingExact d = decoupling_exact(t.strategy, t.toy);
    r.add_stat(t.label + ".E_X", to_double(d.ex));
    r.add_stat(t.label + ".E_Y", to_double(d.ey));
    r.add_stat(t.label + ".max_sign", to_double(d.max_sign));
    r.add_stat(t.label + ".c1", d.r1);
    r.add_stat(t.label + ".c2", d.r2);
    if (!d.finite) failures += 1.0;
    if (t.strategy.deterministic() && d.ex != d.ey) {
      failures += 1.0;
      r.check(false, t.label + ": deterministic coefficients but E_X != E_Y");
    }
  }
  r.statistic = failures;
  r.tolerance = 0.0;
  r.finish();
  return r;
}

namespace {

std::vector<double> block_sums(const IntegrationResult& run, std::size_t blocks) {
  std::vector<double> x(blocks, 0.0);
  for (const LedgerEntry& e : run.ledger) x[e.block] += e.coefficient * e.increment;
  return x;
}

double min_one(double x) { return std::min(std::abs(x), 1.0); }

}  // namespace

ExperimentReport decoupling_report(const std::string& name, const StepStrategy& strategy,
                                   const CharacteristicTriplet& triplet, std::size_t replicates, std::size_t seeds,
                                   const VerifyOptions& options) {
  const std::size_t blocks = strategy.block_count();
  if (blocks > 12) throw std::invalid_argument("decoupling_report: more than 12 blocks");
  ExperimentReport r;
  r.name = name;
  r.indicative = true;
  r.add_param("replicates", static_cast<double>(replicates));
  r.add_param("seeds", static_cast<double>(seeds));
  r.add_param("blocks", static_cast<double>(blocks));
  const IncrementSampler sampler(triplet, options.sampler);
  std::vector<double> r1s;
  std::vector<double> r2s;
  bool finite = true;
  for (std::size_t s = 0; s < seeds; ++s) {
    const RngKey key{options.seed + s, kFirstUserComponent + 5, 0, 0};
    const RngKey copy = key.with_component(kDecoupledComponent);
    struct Row {
      double x = 0.0;
      double y = 0.0;
      std::vector<double> signed_x;
    };
    const std::vector<Row> rows = parallel_map<Row>(replicates, options.workers, [&](std::size_t i) {
      const IntegrationResult run = integrate_predictable(strategy, sampler, key.with_replicate(i));
      const RngKey ck = copy.with_replicate(i);
      double y = 0.0;
      for (const LedgerEntry& e : run.ledger) y += e.coefficient * sampler.sample(e.cell, ck);
      const std::vector<double> xs = block_sums(run, blocks);
      Row row;
      row.x = min_one(run.value);
      row.y = min_one(y);
      row.signed_x.resize(std::size_t{1} << blocks);
      for (std::size_t mask = 0; mask < row.signed_x.size(); ++mask) {
        double t = 0.0;
        for (std::size_t k = 0; k < blocks; ++k) t += (mask >> k) & 1U ? -xs[k] : xs[k];
        row.signed_x[mask] = min_one(t);
      }
      return row;
    });
    double ex = 0.0;
    double ey = 0.0;
    std::vector<double> es(std::size_t{1} << blocks, 0.0);
    for (const Row& row : rows) {
      ex += row.x;
      ey += row.y;
      for (std::size_t m = 0; m < es.size(); ++m) es[m] += row.signed_x[m];
    }
    const double n = static_cast<double>(replicates);
    ex /= n;
    ey /= n;
    const double es_max = *std::max_element(es.begin(), es.end()) / n;
    const double r1 = ey > 0.0 ? ex / ey : (ex == 0.0 ? 0.0 : kInfinity);
    const double r2 = es_max > 0.0 ? ey / es_max : (ey == 0.0 ? 0.0 : kInfinity);
    finite = finite && std::isfinite(r1) && std::isfinite(r2);
    r1s.push_back(r1);
    r2s.push_back(r2);
    r.add_stat("seed" + std::to_string(s) + ".r1", r1);
    r.add_stat("seed" + std::to_string(s) + ".r2", r2);
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*hi == 0.0) return 0.0;
    return (*hi - *lo) / *lo;
  };
  r.check(finite, "a decoupling ratio is not finite");
  r.add_stat("r1_relative_spread", spread(r1s));
  r.add_stat("r2_relative_spread", spread(r2s));
  r.statistic = std::max(spread(r1s), spread(r2s));
  r.tolerance = 0.2 * options.tolerance_scale;
  r.finish();
  return r;
}

ExperimentReport maximal_inequality_exact_report(const std::string& name, const std::vector<ToyCase>& toys,
                                                 const std::vector<double>& c_grid) {
  ExperimentReport r;
  r.name = name;
  r.add_param("toys", static_cast<double>(toys.size()));
  r.add_param("levels", static_cast<double>(c_grid.size()));
  double failures = 0.0;
  for (const ToyCase& t : toys) {
    const GammaFamily family = GammaFamily::standard(t.strategy.block_count(), c_grid);
    const MaximalExact m = maximal_inequality_exact(t.strategy, t.toy, family, c_grid);
    r.add_stat(t.label + ".comparisons", static_cast<double>(m.comparisons));
    r.add_stat(t.label + ".worst_margin", m.worst_margin);
    if (!m.holds) {
      failures += 1.0;
      r.check(false, t.label + ": violated for " + m.worst_case);
    }
  }
  r.statistic = failures;
  r.tolerance = 0.0;
  r.finish();
  return r;
}

ExperimentReport maximal_inequality_check(const std::string& name, const StepStrategy& strategy,
                                          const CharacteristicTriplet& triplet, const std::vector<double>& c_grid,
                                          std::size_t replicates, const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.indicative = true;
  r.add_param("replicates", static_cast<double>(replicates));
  r.add_param("levels", static_cast<double>(c_grid.size()));
  const GammaFamily family = GammaFamily::standard(strategy.block_count(), c_grid);
  r.add_param("family_size", static_cast<double>(family.size()));
  const IncrementSampler sampler(triplet, options.sampler);
  const RngKey key = experiment_key(options, kFirstUserComponent + 6);
  const std::size_t members = family.size();
  const std::size_t levels = c_grid.size();
  const std::size_t chunks = std::min<std::size_t>(replicates, 64);
  using Counts = std::vector<std::uint64_t>;
  const std::vector<Counts> partial = parallel_map<Counts>(chunks, options.workers, [&](std::size_t chunk) {
    Counts counts(2 * members * levels, 0);
    const std::size_t begin = replicates * chunk / chunks;
    const std::size_t end = replicates * (chunk + 1) / chunks;
    std::vector<double> values(triplet.cell_count(), 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      const RngKey k = key.with_replicate(i);
      for (const StrategyBlock& b : strategy.blocks())
        for (const BlockTerm& t : b.terms) {
          const std::size_t c = strategy.domain().cell_index(b.time_index, t.box);
          values[c] = sampler.sample(c, k);
        }
      for (std::size_t m = 0; m < members; ++m) {
        Modulation mod;
        mod.gamma = &family.members()[m];
        const IntegrationResult run =
            run_strategy(strategy, [&](std::size_t cell) { return values[cell]; }, mod);
        const double peak = run.running_max();
        const double end_abs = std::abs(run.value);
        for (std::size_t l = 0; l < levels; ++l) {
          if (peak >= c_grid[l]) ++counts[(m * levels + l) * 2];
          if (end_abs >= c_grid[l]) ++counts[(m * levels + l) * 2 + 1];
        }
      }
    }
    return counts;
  });
  Counts total(2 * members * levels, 0);
  for (const Counts& c : partial)
    for (std::size_t j = 0; j < c.size(); ++j) total[j] += c[j];
  const double n = static_cast<double>(replicates);
  double worst = -kInfinity;
  for (std::size_t l = 0; l < levels; ++l) {
    double rhs = 0.0;
    for (std::size_t m = 0; m < members; ++m) rhs = std::max(rhs, static_cast<double>(total[(m * levels + l) * 2 + 1]) / n);
    for (std::size_t m = 0; m < members; ++m) {
      const double lhs = static_cast<double>(total[(m * levels + l) * 2]) / n;
      const double slack = 3.0 * options.tolerance_scale * std::sqrt((lhs * (1 - lhs) + rhs * (1 - rhs)) / n);
      worst = std::max(worst, lhs - rhs - slack);
    }
    r.add_stat("max_endpoint_probability_c" + std::to_string(l), rhs);
  }
  r.statistic = worst;
  r.tolerance = 0.0;
  r.finish();
  return r;
}

GridFunction realized_integrand(const StepStrategy& strategy, const IntegrationResult& run) {
  std::vector<double> v(strategy.domain().cell_count(), 0.0);
  for (const LedgerEntry& e : run.ledger) v[e.cell] = e.coefficient;
  return GridFunction(strategy.domain_ptr(), std::move(v));
}

namespace {

double approximate(ApproximationScheme scheme, double xi, double k) {
  if (scheme == ApproximationScheme::scale) return (1.0 - 1.0 / k) * xi;
  return std::abs(xi) <= k ? xi : 0.0;
}

double phi_cell(const CharacteristicTriplet& triplet, std::size_t cell, double alpha) {
  return zeta_theta(triplet, cell, alpha) + eta_theta(triplet, cell, alpha);
}

}  // namespace

DominatedConvergenceSeries dominated_convergence_series(const StepStrategy& strategy,
                                                        const std::function<double(double)>& dominating,
                                                        ApproximationScheme scheme,
                                                        const CharacteristicTriplet& triplet,
                                                        const std::vector<double>& k_grid, std::size_t replicates,
                                                        const VerifyOptions& options) {
  for (double k : k_grid)
    if (!(k > 0.0)) throw std::invalid_argument("dominated_convergence: k must be positive");
  const GammaFamily family = GammaFamily::standard(strategy.block_count());
  const IncrementSampler sampler(triplet, options.sampler);
  const RngKey key = experiment_key(options, kFirstUserComponent + 7);
  const std::size_t nk = k_grid.size();
  const std::size_t members = family.size();
  struct Row {
    std::vector<double> norm;
    std::vector<double> emery;
    std::size_t violations = 0;
  };
  const std::vector<Row> rows = parallel_map<Row>(replicates, options.workers, [&](std::size_t i) {
    const RngKey k = key.with_replicate(i);
    std::vector<double> values(triplet.cell_count(), 0.0);
    const IncrementSource source = [&](std::size_t cell) { return values[cell]; };
    for (const StrategyBlock& b : strategy.blocks())
      for (const BlockTerm& t : b.terms) {
        const std::size_t c = strategy.domain().cell_index(b.time_index, t.box);
        values[c] = sampler.sample(c, k);
      }
    const IntegrationResult base = run_strategy(strategy, source);
    Row row;
    row.norm.resize(nk);
    row.emery.assign(nk * members, 0.0);
    for (std::size_t j = 0; j < nk; ++j) {
      const double kj = k_grid[j];
      std::vector<double> diff(triplet.cell_count(), 0.0);
      for (const LedgerEntry& e : base.ledger) {
        const double approx = approximate(scheme, e.base, kj);
        diff[e.cell] = approx - e.base;
        const double lhs = phi_cell(triplet, e.cell, std::abs(approx));
        const double rhs = phi_cell(triplet, e.cell, std::abs(dominating(e.base)));
        if (lhs > rhs * (1.0 + 1e-12) + 1e-300) ++row.violations;
      }
      const FNormResult nr = f_norm(triplet, GridFunction(strategy.domain_ptr(), std::move(diff)));
      row.norm[j] = nr.infinite ? 1.0 : std::min(nr.value, 1.0);
      Modulation mod;
      mod.pointwise = [scheme, kj](double xi) { return approximate(scheme, xi, kj) - xi; };
      for (std::size_t m = 0; m < members; ++m) {
        mod.gamma = &family.members()[m];
        row.emery[j * members + m] = std::min(run_strategy(strategy, source, mod).running_max(), 1.0);
      }
    }
    return row;
  });
  DominatedConvergenceSeries out;
  out.k = k_grid;
  out.norm.assign(nk, 0.0);
  out.emery.assign(nk, 0.0);
  std::vector<double> emery_sum(nk * members, 0.0);
  for (const Row& row : rows) {
    out.domination_violations += row.violations;
    for (std::size_t j = 0; j < nk; ++j) out.norm[j] += row.norm[j];
    for (std::size_t j = 0; j < emery_sum.size(); ++j) emery_sum[j] += row.emery[j];
  }
  const double n = static_cast<double>(replicates);
  for (std::size_t j = 0; j < nk; ++j) {
    out.norm[j] /= n;
    for (std::size_t m = 0; m < members; ++m) out.emery[j] = std::max(out.emery[j], emery_sum[j * members + m] / n);
  }
  return out;
}

ExperimentReport dominated_convergence_report(const std::string& name, const StepStrategy& strategy,
                                              const std::function<double(double)>& dominating,
                                              ApproximationScheme scheme, const CharacteristicTriplet& triplet,
                                              const std::vector<double>& k_grid, std::size_t replicates,
                                              double tolerance, bool require_exact_zero, const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.indicative = true;
  r.add_param("scheme", scheme == ApproximationScheme::scale ? "scale" : "truncate");
  r.add_param("replicates", static_cast<double>(replicates));
  const DominatedConvergenceSeries s =
      dominated_convergence_series(strategy, dominating, scheme, triplet, k_grid, replicates, options);
  for (std::size_t j = 0; j < s.k.size(); ++j) {
    r.add_stat("k" + std::to_string(j), s.k[j]);
    r.add_stat("norm" + std::to_string(j), s.norm[j]);
    r.add_stat("emery" + std::to_string(j), s.emery[j]);
  }
  r.add_stat("domination_violations", static_cast<double>(s.domination_violations));
  r.check(s.domination_violations == 0, "approximants not dominated cellwise");
  bool monotone = true;
  for (std::size_t j = 1; j < s.norm.size(); ++j)
    if (s.norm[j] > s.norm[j - 1] * (1.0 + 1e-12)) monotone = false;
  r.check(monotone, "norm series increases");
  r.statistic = std::max(s.norm.back(), s.emery.back());
  if (require_exact_zero) {
    r.tolerance = 0.0;
  } else {
    r.tolerance = tolerance * options.tolerance_scale;
  }
  r.finish();
  return r;
}

ExperimentReport norm_integral_equivalence(const std::string& name, const std::vector<StepStrategy>& sequence,
                                           const CharacteristicTriplet& triplet, std::size_t replicates,
                                           double tolerance, bool expect_decay, const VerifyOptions& options) {
  if (sequence.empty()) throw std::invalid_argument("norm_integral_equivalence: empty sequence");
  ExperimentReport r;
  r.name = name;
  r.indicative = true;
  r.add_param("replicates", static_cast<double>(replicates));
  r.add_param("sequence_length", static_cast<double>(sequence.size()));
  r.add_param("expect_decay", expect_decay ? "true" : "false");
  const IncrementSampler sampler(triplet, options.sampler);
  const RngKey key = experiment_key(options, kFirstUserComponent + 8);
  std::vector<double> norms;
  std::vector<double> integrals;
  for (std::size_t j = 0; j < sequence.size(); ++j) {
    const StepStrategy& strategy = sequence[j];
    const GammaFamily family = GammaFamily::standard(strategy.block_count());
    const std::size_t members = family.size();
    const auto rows = parallel_map<std::vector<double>>(replicates, options.workers, [&](std::size_t i) {
      const RngKey k = key.with_replicate(i);
      std::vector<double> values(triplet.cell_count(), 0.0);
      for (std::size_t c = 0; c < values.size(); ++c) values[c] = sampler.sample(c, k);
      const IncrementSource source = [&](std::size_t cell) { return values[cell]; };
      std::vector<double> row(members + 1);
      const IntegrationResult base = run_strategy(strategy, source);
      const FNormResult nr = f_norm(triplet, realized_integrand(strategy, base));
      row[0] = nr.infinite ? 1.0 : std::min(nr.value, 1.0);
      for (std::size_t m = 0; m < members; ++m) {
        Modulation mod;
        mod.gamma = &family.members()[m];
        row[m + 1] = min_one(run_strategy(strategy, source, mod).value);
      }
      return row;
    });
    std::vector<double> sums(members + 1, 0.0);
    for (const auto& row : rows)
      for (std::size_t m = 0; m <= members; ++m) sums[m] += row[m];
    const double n = static_cast<double>(replicates);
    norms.push_back(sums[0] / n);
    integrals.push_back(*std::max_element(sums.begin() + 1, sums.end()) / n);
    r.add_stat("norm" + std::to_string(j), norms.back());
    r.add_stat("integral" + std::to_string(j), integrals.back());
  }
  const double tol = tolerance * options.tolerance_scale;
  const bool norm_small = norms.back() <= tol;
  const bool integral_small = integrals.back() <= tol;
  r.check(norm_small == integral_small, "norm and integral sequences disagree at the final index");
  r.check(norm_small == expect_decay, expect_decay ? "sequences do not decay" : "fixed sequence reported as decaying");
  r.statistic = expect_decay ? std::max(norms.back(), integrals.back()) : 0.0;
  r.tolerance = expect_decay ? tol : 0.0;
  r.finish();
  return r;
}

ExperimentReport modular_closed_form_check(const std::string& name, std::size_t functions,
                                           const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.add_param("functions_per_fixture", static_cast<double>(functions));
  const DomainPtr d = time_domain(6);
  struct Fixture {
    ExampleFamily family;
    CharacteristicTriplet triplet;
  };
  const std::vector<Fixture> fixtures{
      {ExampleFamily::poisson, families::poisson(d, 1.3)},
      {ExampleFamily::compensated_poisson, families::compensated_poisson(d, 0.8)},
      {ExampleFamily::stable, families::stable(d, 0.5, 0.8, 0.2, 0.7)},
      {ExampleFamily::stable, families::stable(d, 1.5, 0.3, 0.7, 1.2)},
  };
  FixtureRng rng(experiment_key(options, kFirstUserComponent + 9));
  double worst = 0.0;
  for (const Fixture& fx : fixtures) {
    for (std::size_t i = 0; i < functions; ++i) {
      std::vector<double> v(d->cell_count());
      for (double& x : v) x = rng.coin(0.1) ? 0.0 : (rng.coin() ? 1.0 : -1.0) * std::pow(10.0, rng.uniform(-3.0, 3.0));
      const GridFunction f(d, v);
      const double numeric = modular_value(fx.triplet, f);
      const double closed = closed_form_modular(fx.family, fx.triplet, f);
      const double err = closed == 0.0 ? std::abs(numeric) : std::abs(numeric - closed) / std::abs(closed);
      worst = std::max(worst, err);
    }
  }
  r.add_stat("max_relative_error", worst);
  r.statistic = worst;
  r.tolerance = 1e-8 * options.tolerance_scale;
  r.finish();
  return r;
}

ExperimentReport eta_identity_check(const std::string& name, std::size_t points, const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.add_param("points", static_cast<double>(points));
  const CharacteristicTriplet t = families::compensated_poisson(time_domain(1), 1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    const double alpha = -10.0 + 20.0 * static_cast<double>(j) / static_cast<double>(points - 1);
    const double expected = std::max(std::abs(alpha) - 1.0, 0.0);
    worst = std::max({worst, std::abs(eta_theta(t, 0, alpha) - expected),
                      std::abs(eta_theta_search(t, 0, alpha).value - expected)});
  }
  r.add_stat("max_abs_error", worst);
  r.statistic = worst;
  r.tolerance = 1e-10 * options.tolerance_scale;
  r.finish();
  return r;
}

ExperimentReport fnorm_root_check(const std::string& name, const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  const DomainPtr d = time_domain(1);
  double worst = 0.0;
  for (double p : {0.5, 1.5}) {
    for (double mass : {0.25, 1.0, 4.0}) {
      const CharacteristicTriplet t = families::stable(d, p, 0.5, 0.5, mass);
      const GridFunction f = GridFunction::constant(d, 1.0);
      const FNormResult res = f_norm(t, f);
      const double expected = std::pow(2.0 * mass / (2.0 - p), 1.0 / (1.0 + p));
      worst = std::max(worst, std::abs(res.value - expected) / expected);
      const double v = res.value;
      r.check(modular_value(t, f.scaled(1.0 / v)) <= v, "iota(f/|f|) exceeds |f|");
      const double below = v * (1.0 - 1e-9);
      r.check(modular_value(t, f.scaled(1.0 / below)) > below, "norm is not the infimum");
      r.add_stat("p" + fmt(p) + ".m" + fmt(mass), v);
    }
  }
  r.add_stat("max_relative_error", worst);
  r.statistic = worst;
  r.tolerance = 1e-8 * options.tolerance_scale;
  r.finish();
  return r;
}

namespace {

CharacteristicTriplet random_triplet(FixtureRng& rng, const DomainPtr& d) {
  std::vector<double> density(d->cell_count());
  for (double& x : density) x = rng.uniform(0.05, 3.0);
  const ControlMeasure control(*d, density);
  switch (rng.index(5)) {
    case 0:
      return families::poisson(d, rng.uniform(0.1, 3.0));
    case 1:
      return families::compensated_poisson(d, rng.uniform(0.1, 3.0));
    case 2:
      return families::gaussian(d, rng.uniform(0.1, 3.0), rng.uniform(0.1, 2.0));
    case 3: {
      const double p = rng.coin() ? rng.uniform(0.2, 0.8) : rng.uniform(1.2, 1.8);
      const double x = rng.uniform(0.0, 1.0);
      return families::stable(d, p, x, 1.0 - x, rng.uniform(0.1, 3.0));
    }
    default: {
      std::vector<CellLaw> cells;
      for (std::size_t c = 0; c < d->cell_count(); ++c) {
        std::vector<Atom> atoms;
        const std::size_t n = 1 + rng.index(3);
        for (std::size_t j = 0; j < n; ++j)
          atoms.push_back({(rng.coin() ? 1.0 : -1.0) * std::pow(10.0, rng.uniform(-1.5, 1.0)), rng.uniform(0.01, 2.0)});
        cells.push_back({rng.uniform(-1.0, 1.0), rng.coin() ? rng.uniform(0.0, 1.0) : 0.0,
                         std::make_shared<const LevyKernel>(LevyKernel::atoms(std::move(atoms)))});
      }
      return CharacteristicTriplet(d, control, std::move(cells));
    }
  }
}

}  // namespace

ExperimentReport delta2_check(const std::string& name, std::size_t pairs, const VerifyOptions& options) {
  ExperimentReport r;
  r.name = name;
  r.add_param("pairs", static_cast<double>(pairs));
  const DomainPtr d = time_domain(3);
  FixtureRng rng(experiment_key(options, kFirstUserComponent + 10));
  double failures = 0.0;
  double min_margin = kInfinity;
  for (std::size_t i = 0; i < pairs; ++i) {
    const CharacteristicTriplet t = random_triplet(rng, d);
    std::vector<double> v(d->cell_count());
    for (double& x : v) x = (rng.coin() ? 1.0 : -1.0) * std::pow(10.0, rng.uniform(-3.0, 3.0));
    const GridFunction f(d, v);
    const double one = modular_value(t, f);
    const double two = modular_value(t, f.scaled(2.0));
    const double margin = 5.0 * one - two;
    min_margin = std::min(min_margin, margin);
    if (!(two <= 5.0 * one + 1e-12)) failures += 1.0;
  }
  r.add_stat("min_margin", min_margin);
  r.statistic = failures;
  r.tolerance = 0.0;
  r.finish();
  return r;
}

namespace {

ToyLaw law(std::vector<std::int64_t> values, std::vector<std::int64_t> weights, std::int64_t scale = 1) {
  ToyLaw l{std::move(values), std::move(weights), scale};
  l.validate();
  return l;
}

StepStrategy toy_strategy(std::size_t blocks, const std::vector<CoefficientRule>& rules) {
  const DomainPtr d = time_domain(blocks);
  std::vector<StrategyBlock> b;
  for (std::size_t k = 0; k < blocks; ++k) b.push_back({k, {{0, rules[k]}}});
  return StepStrategy(d, std::move(b));
}

ToyCase toy(std::string label, std::vector<CoefficientRule> rules, const ToyLaw& l) {
  const std::size_t n = rules.size();
  return {std::move(label), toy_strategy(n, rules), ToyField{std::vector<ToyLaw>(n, l)}};
}

std::vector<ToyCase> decoupling_toys() {
  return {
      toy("two_block_threshold", {rules::constant(1.0), rules::threshold(3.0, 1.5)}, law({-1, 2}, {2, 1})),
      toy("two_block_sign", {rules::constant(0.5), rules::sign_of_past_sum(1.5)}, law({-1, 1, 3}, {2, 1, 1}, 2)),
      toy("three_block_sign", std::vector<CoefficientRule>(3, rules::sign_of_past_sum(1.0)), law({-2, 1, 3}, {1, 2, 1}, 2)),
      toy("deterministic", {rules::constant(1.0), rules::constant(-2.0)}, law({-1, 1}, {1, 1})),
      toy("zero", {rules::constant(0.0), rules::constant(0.0)}, law({-1, 2}, {2, 1})),
  };
}

std::vector<ToyCase> maximal_toys() {
  const ToyLaw pm = law({-1, 1}, {1, 1});
  return {
      toy("single_block", {rules::constant(1.0)}, pm),
      toy("three_block_constant", std::vector<CoefficientRule>(3, rules::constant(1.0)), pm),
      toy("three_block_sign", std::vector<CoefficientRule>(3, rules::sign_of_past_sum(1.0)), pm),
      toy("three_block_threshold", std::vector<CoefficientRule>(3, rules::threshold(1.0, 1.0)),
          law({-2, 1, 3}, {1, 2, 1}, 2)),
  };
}

DomainPtr single() { return time_domain(1); }

/// Four cells of unit compensated-Poisson mass.
CharacteristicTriplet block_fixture() { return families::compensated_poisson(time_domain(4), 4.0); }

CoefficientRule one_plus_abs_past() {
  return CoefficientRule([](const PastLedger& past) { return 1.0 + std::abs(past.integral()); }, "one_plus_abs_past");
}

using Runner = std::function<ExperimentReport(const std::string&, const VerifyOptions&)>;

std::vector<std::pair<std::string, Runner>> suite() {
  const std::size_t n_cf = 100000;
  std::vector<std::pair<std::string, Runner>> s;
  s.emplace_back("modular.closed_form",
                 [](const std::string& n, const VerifyOptions& o) { return modular_closed_form_check(n, 100, o); });
  s.emplace_back("modular.eta_identity",
                 [](const std::string& n, const VerifyOptions& o) { return eta_identity_check(n, 1000, o); });
  s.emplace_back("modular.fnorm_root", [](const std::string& n, const VerifyOptions& o) { return fnorm_root_check(n, o); });
  s.emplace_back("modular.delta2", [](const std::string& n, const VerifyOptions& o) { return delta2_check(n, 1000, o); });
  s.emplace_back("cf_match.poisson", [=](const std::string& n, const VerifyOptions& o) {
    return cf_match(n, families::poisson(single(), 2.0), {0}, n_cf, default_u_grid(), o);
  });
  s.emplace_back("cf_match.comp_poisson", [=](const std::string& n, const VerifyOptions& o) {
    return cf_match(n, families::compensated_poisson(single(), 2.0), {0}, n_cf, default_u_grid(), o);
  });
  s.emplace_back("cf_match.gaussian", [=](const std::string& n, const VerifyOptions& o) {
    return cf_match(n, families::gaussian(single(), 1.0, 1.0), {0}, n_cf, default_u_grid(), o);
  });
  s.emplace_back("cf_match.stable_0.5", [=](const std::string& n, const VerifyOptions& o) {
    return cf_match(n, families::stable(single(), 0.5, 0.75, 0.25, 1.0), {0}, n_cf, default_u_grid(), o);
  });
  s.emplace_back("cf_match.stable_1.5", [=](const std::string& n, const VerifyOptions& o) {
    return cf_match(n, families::stable(single(), 1.5, 0.75, 0.25, 1.0), {0}, n_cf, default_u_grid(), o);
  });
  s.emplace_back("cf_match.stable_exact_1.5", [=](const std::string& n, const VerifyOptions& o) {
    return cf_match_stable_exact(n, families::stable(single(), 1.5, 0.75, 0.25, 1.0), 0, n_cf, default_u_grid(), o);
  });
  s.emplace_back("integral_law.mixed", [=](const std::string& n, const VerifyOptions& o) {
    const DomainPtr d = std::make_shared<const Domain>(
        std::vector<double>{0.0, 0.5, 1.0}, std::vector<Box>{Box{{0.0}, {0.5}}, Box{{0.5}, {1.0}}});
    const ControlMeasure control(*d, {2.0, 1.0, 4.0, 1.0});
    std::vector<CellLaw> cells{
        {0.0, 0.0, std::make_shared<const LevyKernel>(LevyKernel::atoms({{1.0, 1.0}}))},
        {0.3, 0.8, std::make_shared<const LevyKernel>(LevyKernel::zero())},
        {0.2, 0.0, std::make_shared<const LevyKernel>(LevyKernel::stable(1.5, 0.75, 0.25))},
        {0.1, 0.2, std::make_shared<const LevyKernel>(LevyKernel::atoms({{-0.5, 1.2}, {2.0, 0.4}}))},
    };
    const CharacteristicTriplet t(d, control, std::move(cells));
    return integral_law_check(n, t, GridFunction(d, {1.5, -0.7, 0.8, 2.0}), n_cf, default_u_grid(), o);
  });
  s.emplace_back("sum_control.exact", [](const std::string& n, const VerifyOptions& o) {
    std::vector<std::vector<ToyLaw>> tuples{{law({-1, 1}, {1, 1})}, {law({0}, {1})}};
    const auto random = random_toy_tuples(50, 5, o.seed);
    tuples.insert(tuples.end(), random.begin(), random.end());
    return sum_control_check(n, tuples);
  });
  s.emplace_back("drift_sup.comp_poisson", [](const std::string& n, const VerifyOptions& o) {
    const DomainPtr d = single();
    return drift_sup_check(n, families::compensated_poisson(d, 1.0), GridFunction::constant(d, 2.0), o);
  });
  s.emplace_back("drift_sup.random_atoms", [](const std::string& n, const VerifyOptions& o) {
    const DomainPtr d = time_domain(10);
    FixtureRng rng(experiment_key(o, kFirstUserComponent + 11));
    std::vector<double> density(d->cell_count());
    for (double& x : density) x = rng.uniform(0.5, 3.0);
    std::vector<CellLaw> cells;
    std::vector<double> f;
    for (std::size_t c = 0; c < d->cell_count(); ++c) {
      std::vector<Atom> atoms;
      const std::size_t k = 1 + rng.index(3);
      for (std::size_t j = 0; j < k; ++j)
        atoms.push_back({(rng.coin() ? 1.0 : -1.0) * rng.uniform(0.1, 3.0), rng.uniform(0.1, 2.0)});
      cells.push_back({rng.uniform(-1.0, 1.0), 0.0, std::make_shared<const LevyKernel>(LevyKernel::atoms(atoms))});
      f.push_back(rng.uniform(-3.0, 3.0));
    }
    const CharacteristicTriplet t(d, ControlMeasure(*d, density), std::move(cells));
    return drift_sup_check(n, t, GridFunction(d, f), o);
  });
  s.emplace_back("partition_limit.poisson", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = families::poisson(single(), 1.0);
    return partition_limit_report(n, t, {0}, 20, 20000, 1e-6, o);
  });
  s.emplace_back("partition_limit.gaussian", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = families::gaussian(single(), 1.0, 0.7);
    return partition_limit_report(n, t, {0}, 20, 20000, 1e-8, o);
  });
  s.emplace_back("tangency.exact",
                 [](const std::string& n, const VerifyOptions&) { return tangency_exact_report(n, decoupling_toys()); });
  s.emplace_back("decoupling.exact",
                 [](const std::string& n, const VerifyOptions&) { return decoupling_exact_report(n, decoupling_toys()); });
  s.emplace_back("decoupling.mc", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = block_fixture();
    return decoupling_report(n, StepStrategy::uniform(t.domain_ptr(), rules::threshold(2.0, 1.5)), t, 20000, 5, o);
  });
  s.emplace_back("maximal.exact", [](const std::string& n, const VerifyOptions&) {
    return maximal_inequality_exact_report(n, maximal_toys(), {0.5, 1.0, 1.5, 2.0, 3.0});
  });
  s.emplace_back("maximal.mc", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = block_fixture();
    return maximal_inequality_check(n, StepStrategy::uniform(t.domain_ptr(), rules::sign_of_past_sum()), t,
                                    {0.5, 1.0, 2.0}, 100000, o);
  });
  s.emplace_back("dominated_convergence.scale", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = block_fixture();
    return dominated_convergence_report(n, StepStrategy::uniform(t.domain_ptr(), one_plus_abs_past()),
                                        [](double x) { return std::abs(x); }, ApproximationScheme::scale, t,
                                        {1.0, 10.0, 1e2, 1e3, 1e4, 1e5}, 1000, 1e-2, false, o);
  });
  s.emplace_back("dominated_convergence.truncate_bounded", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = block_fixture();
    return dominated_convergence_report(n, StepStrategy::uniform(t.domain_ptr(), rules::sign_of_past_sum(1.5)),
                                        [](double x) { return std::abs(x); }, ApproximationScheme::truncate, t,
                                        {0.5, 1.0, 2.0, 4.0}, 1000, 0.0, true, o);
  });
  s.emplace_back("dominated_convergence.truncate_unbounded", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = block_fixture();
    return dominated_convergence_report(n, StepStrategy::uniform(t.domain_ptr(), one_plus_abs_past()),
                                        [](double x) { return std::abs(x); }, ApproximationScheme::truncate, t,
                                        {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}, 1000, 1e-2, false, o);
  });
  s.emplace_back("norm_integral.decaying", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = block_fixture();
    std::vector<StepStrategy> seq;
    for (double k : {1.0, 10.0, 1e2, 1e3, 1e4, 1e5})
      seq.push_back(StepStrategy::uniform(t.domain_ptr(), rules::sign_of_past_sum(1.0 / k)));
    return norm_integral_equivalence(n, seq, t, 2000, 1e-2, true, o);
  });
  s.emplace_back("norm_integral.fixed", [](const std::string& n, const VerifyOptions& o) {
    const CharacteristicTriplet t = block_fixture();
    const std::vector<StepStrategy> seq(4, StepStrategy::uniform(t.domain_ptr(), rules::sign_of_past_sum(1.0)));
    return norm_integral_equivalence(n, seq, t, 2000, 1e-2, false, o);
  });
  return s;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [name, run] : suite()) out.push_back(name);
  return out;
}

ExperimentReport run_experiment(const std::string& name, const VerifyOptions& options) {
  for (const auto& [n, run] : suite()) {
    if (n != name) continue;
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport r = run(n, options);
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::vector<ExperimentReport> run_suite(const VerifyOptions& options) {
  std::vector<ExperimentReport> out;
  for (const std::string& name : experiment_names()) out.push_back(run_experiment(name, options));
  return out;
}

}  // namespace levybasis
