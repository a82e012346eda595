#include "levybasis/sampler.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "levybasis/truncation.hpp"

namespace levybasis {

double TruncationPlan::bias_budget(double u) const {
  if (exact) return 0.0;
  const double a = std::abs(u);
  return a * a * a / 6.0 * third_moment + a * a * a * a / 24.0 * fourth_moment +
         a * a * a * a * a / 120.0 * fifth_moment;
}

TruncationPlan truncation_plan(const CharacteristicTriplet& triplet, std::size_t cell, const SamplerOptions& options) {
  const double chi = triplet.control().mass(cell);
  const CellLaw& law = triplet.cell(cell);
  const LevyKernel& kernel = *law.kernel;
  TruncationPlan plan;
  plan.drift = chi * law.a;
  plan.gaussian_variance = chi * law.q;
  if (chi == 0.0) return plan;

  if (kernel.family() == LevyKernel::Family::atoms) {
    for (const Atom& a : kernel.atom_list()) {
      if (a.weight == 0.0) continue;
      plan.atoms.push_back({a.location, chi * a.weight});
      plan.drift -= chi * a.weight * tau(a.location);
    }
    return plan;
  }

  if (!(options.epsilon > 0.0) || options.epsilon > 1.0)
    throw std::invalid_argument("SamplerOptions.epsilon must lie in (0, 1]");
  double eps = options.epsilon;
  if (chi * kernel.mass_above(eps) > options.max_expected_jumps) {
    double lo = eps;
    double hi = 1.0;
    if (chi * kernel.mass_above(hi) > options.max_expected_jumps) {
      eps = hi;
    } else {
      for (int i = 0; i < 200 && hi / lo - 1.0 > 1e-12; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (chi * kernel.mass_above(mid) > options.max_expected_jumps) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      eps = hi;
    }
  }
  plan.exact = false;
  plan.epsilon = eps;
  plan.table = kernel.jump_table(eps);
  plan.jump_rate = chi * plan.table.total_mass();
  plan.drift -= chi * kernel.tau_mean_above(eps);
  plan.small_jump_variance = chi * kernel.abs_moment_below(eps, 2);
  plan.third_moment = chi * std::abs(kernel.signed_moment_below(eps, 3));
  plan.fourth_moment = chi * kernel.abs_moment_below(eps, 4);
  plan.fifth_moment = chi * kernel.abs_moment_below(eps, 5);
  if (!std::isfinite(plan.jump_rate) || !std::isfinite(plan.drift) || !std::isfinite(plan.small_jump_variance))
    throw std::domain_error("truncation_plan: non-finite jump rate for cell " + std::to_string(cell));
  return plan;
}

double cf_bias_budget(const CharacteristicTriplet& triplet, const CellSet& cells, double u,
                      const SamplerOptions& options) {
  double total = 0.0;
  for (std::size_t c : cells) total += truncation_plan(triplet, c, options).bias_budget(u);
  return total;
}

namespace {

double draw_from_plan(const TruncationPlan& plan, RngStream& rng) {
  double x = plan.drift;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double variance = plan.gaussian_variance + plan.small_jump_variance;
  if (variance > 0.0) x += std::sqrt(variance) * normal(rng);
  for (const Atom& a : plan.atoms) {
    std::poisson_distribution<long long> count(a.weight);
    x += static_cast<double>(count(rng)) * a.location;
  }
  if (plan.jump_rate > 0.0) {
    std::poisson_distribution<long long> count(plan.jump_rate);
    const long long n = count(rng);
    for (long long j = 0; j < n; ++j) {
      const double u1 = rng.uniform();
      const double u2 = rng.uniform();
      x += plan.table.draw(u1, u2);
    }
  }
  return x;
}

}  // namespace

IncrementSampler::IncrementSampler(const CharacteristicTriplet& triplet, SamplerOptions options) : triplet_(triplet) {
  plans_.reserve(triplet.cell_count());
  for (std::size_t c = 0; c < triplet.cell_count(); ++c) plans_.push_back(truncation_plan(triplet, c, options));
}

double IncrementSampler::sample(std::size_t cell, const RngKey& key) const {
  RngStream rng(key.with_cell(cell));
  return draw_from_plan(plans_.at(cell), rng);
}

double IncrementSampler::bias_budget(const CellSet& cells, double u) const {
  double total = 0.0;
  for (std::size_t c : cells) total += plans_.at(c).bias_budget(u);
  return total;
}

double sample_increment(const CharacteristicTriplet& triplet, std::size_t cell, const RngKey& key,
                        const SamplerOptions& options) {
  const TruncationPlan plan = truncation_plan(triplet, cell, options);
  RngStream rng(key.with_cell(cell));
  return draw_from_plan(plan, rng);
}

double sample_stable_exact(const CharacteristicTriplet& triplet, std::size_t cell, const RngKey& key) {
  const LevyKernel& kernel = triplet.kernel(cell);
  if (kernel.family() != LevyKernel::Family::stable)
    throw std::invalid_argument("sample_stable_exact: cell kernel is not stable");
  const auto& [p, x, y] = kernel.stable_params();
  const double chi = triplet.control().mass(cell);
  RngStream rng(key.with_cell(cell));
  const double u_angle = rng.uniform();
  const double u_exp = rng.uniform();
  std::normal_distribution<double> normal(0.0, 1.0);
  const double gaussian = std::sqrt(chi * triplet.gaussian_density(cell)) * normal(rng);
  const double shift = chi * (triplet.drift_density(cell) - (x - y) / (1.0 - p));
  if (chi == 0.0) return 0.0;

  constexpr double kPi = std::numbers::pi;
  const double skew = x - y;
  const double t = skew * std::tan(kPi * p / 2.0);
  const double b = std::atan(t) / p;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * p));
  const double v = kPi * (u_angle - 0.5);
  const double w = -std::log(u_exp);
  const double standard = s * std::sin(p * (v + b)) / std::pow(std::cos(v), 1.0 / p) *
                          std::pow(std::cos(v - p * (v + b)) / w, (1.0 - p) / p);
  const double scale = std::pow(chi * -p * std::tgamma(-p) * std::cos(kPi * p / 2.0), 1.0 / p);
  return shift + gaussian + scale * standard;
}

IncrementField::IncrementField(DomainPtr domain, std::vector<double> values, RngKey key, bool decoupled)
    : domain_(std::move(domain)), values_(std::move(values)), key_(key), decoupled_(decoupled) {
  if (values_.size() != domain_->cell_count()) throw std::invalid_argument("IncrementField: size mismatch");
}

double IncrementField::sum(const CellSet& cells) const {
  double s = 0.0;
  for (std::size_t c : cells) s += values_.at(c);
  return s;
}

IncrementField sample_field(const IncrementSampler& sampler, const RngKey& key) {
  const std::size_t n = sampler.triplet().cell_count();
  std::vector<double> values(n);
  for (std::size_t c = 0; c < n; ++c) values[c] = sampler.sample(c, key);
  return IncrementField(sampler.triplet().domain_ptr(), std::move(values), key,
                        key.component == kDecoupledComponent);
}

IncrementField sample_field(const CharacteristicTriplet& triplet, const RngKey& key, const SamplerOptions& options) {
  return sample_field(IncrementSampler(triplet, options), key);
}

IncrementField sample_decoupled_field(const IncrementSampler& sampler, const RngKey& key) {
  return sample_field(sampler, key.with_component(kDecoupledComponent));
}

std::vector<double> convolution_root_field(const CharacteristicTriplet& triplet, const CellSet& cells, unsigned m,
                                           const RngKey& key, const SamplerOptions& options) {
  if (m > 40) throw std::invalid_argument("convolution_root_field: depth above 40");
  const std::uint64_t parts = std::uint64_t{1} << m;
  if (key.replicate > (std::numeric_limits<std::uint64_t>::max() >> m))
    throw std::overflow_error("convolution_root_field: replicate index too large for depth");
  const CharacteristicTriplet root = triplet.with_control_scaled(1.0 / static_cast<double>(parts));
  const IncrementSampler sampler(root, options);
  std::vector<double> draws(parts, 0.0);
  for (std::uint64_t l = 0; l < parts; ++l) {
    const RngKey k = key.with_replicate(key.replicate * parts + l);
    for (std::size_t c : cells) draws[l] += sampler.sample(c, k);
  }
  return draws;
}

}  // namespace levybasis
