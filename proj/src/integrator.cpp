#include "levybasis/integrator.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <stdexcept>

#include "levybasis/truncation.hpp"

namespace levybasis {

GammaFamily::GammaFamily(std::vector<GammaMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("GammaFamily: no members");
  for (const auto& m : members_)
    if (!m.multiplier) throw std::invalid_argument("GammaFamily: member '" + m.label + "' has no multiplier");
}

namespace {

GammaMember sign_pattern(std::vector<double> signs, std::string label) {
  return {std::move(label), [signs = std::move(signs)](std::size_t block, const PastLedger&) {
            return block < signs.size() ? signs[block] : 1.0;
          }};
}

std::string pattern_label(const std::vector<double>& signs) {
  std::string s = "signs:";
  for (double v : signs) s += v > 0 ? '+' : '-';
  return s;
}

GammaMember stopped(const GammaMember& base, double level) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "|stop@%.17g", level);
  return {base.label + buf, [f = base.multiplier, level](std::size_t block, const PastLedger& past) {
            return past.effective_running_max() < level ? f(block, past) : 0.0;
          }};
}

}  // namespace

GammaFamily GammaFamily::standard(std::size_t blocks, const std::vector<double>& stop_levels) {
  std::vector<std::vector<double>> patterns;
  if (blocks <= 12) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << blocks); ++mask) {
      std::vector<double> s(blocks);
      for (std::size_t k = 0; k < blocks; ++k) s[k] = (mask >> k) & 1U ? -1.0 : 1.0;
      patterns.push_back(std::move(s));
    }
  } else {
    std::vector<double> plus(blocks, 1.0);
    std::vector<double> minus(blocks, -1.0);
    std::vector<double> alternating(blocks);
    std::vector<double> halves(blocks);
    for (std::size_t k = 0; k < blocks; ++k) {
      alternating[k] = k % 2 == 0 ? 1.0 : -1.0;
      halves[k] = 2 * k < blocks ? 1.0 : -1.0;
    }
    patterns = {plus, minus, alternating, halves};
  }
  std::vector<GammaMember> members;
  for (const auto& s : patterns) members.push_back(sign_pattern(s, pattern_label(s)));
  const std::size_t base_count = members.size();
  for (double level : stop_levels) {
    if (!(level > 0.0)) throw std::invalid_argument("GammaFamily: stop levels must be positive");
    for (std::size_t i = 0; i < base_count; ++i) members.push_back(stopped(members[i], level));
  }
  return GammaFamily(std::move(members));
}

GammaFamily GammaFamily::identity() {
  return GammaFamily({{"identity", [](std::size_t, const PastLedger&) { return 1.0; }}});
}

double IntegrationResult::running_max() const {
  double m = 0.0;
  for (const auto& p : trajectory) m = std::max(m, std::abs(p.value));
  return m;
}

IntegrationResult run_strategy(const StepStrategy& strategy, const IncrementSource& increments,
                               const Modulation& modulation) {
  const Domain& d = strategy.domain();
  IntegrationResult out;
  out.trajectory.push_back({0.0, 0.0});
  double total = 0.0;
  for (std::size_t k = 0; k < strategy.block_count(); ++k) {
    const StrategyBlock& block = strategy.blocks()[k];
    const PastLedger past(out.ledger);
    double gamma = 1.0;
    if (modulation.gamma) {
      gamma = modulation.gamma->multiplier(k, past);
      if (!(std::abs(gamma) <= 1.0))
        throw std::logic_error("GammaFamily member '" + modulation.gamma->label + "' left [-1, 1]");
    }
    std::vector<LedgerEntry> fresh;
    fresh.reserve(block.terms.size());
    for (const BlockTerm& term : block.terms) {
      const double base = term.rule.evaluate(past);
      const double shaped = modulation.pointwise ? modulation.pointwise(base) : base;
      const std::size_t cell = d.cell_index(block.time_index, term.box);
      fresh.push_back({k, block.time_index, cell, base, gamma * shaped, 0.0});
    }
    // Increments of block k are drawn only after every coefficient of the block is fixed.
    for (LedgerEntry& e : fresh) {
      e.increment = increments(e.cell);
      total += e.coefficient * e.increment;
    }
    out.ledger.insert(out.ledger.end(), fresh.begin(), fresh.end());
    out.trajectory.push_back({d.time_grid()[block.time_index + 1], total});
  }
  out.value = total;
  return out;
}

double integrate_simple(const GridFunction& f, const IncrementField& field) {
  if (!same_domain(f.domain(), field.domain()))
    throw std::invalid_argument("integrate_simple: integrand and field live on different domains");
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) s += f[c] * field[c];
  return s;
}

IntegrationResult integrate_predictable(const StepStrategy& strategy, const IncrementSampler& sampler, const RngKey& key,
                                        const Modulation& modulation) {
  if (!same_domain(strategy.domain(), sampler.triplet().domain()))
    throw std::invalid_argument("integrate_predictable: strategy and triplet live on different domains");
  return run_strategy(strategy, [&](std::size_t cell) { return sampler.sample(cell, key); }, modulation);
}

IntegrationResult integrate_predictable(const StepStrategy& strategy, const CharacteristicTriplet& triplet,
                                        const RngKey& key, const SamplerOptions& options) {
  return integrate_predictable(strategy, IncrementSampler(triplet, options), key);
}

IntegrationResult integrate_predictable(const StepStrategy& strategy, const IncrementField& field,
                                        const Modulation& modulation) {
  if (!same_domain(strategy.domain(), field.domain()))
    throw std::invalid_argument("integrate_predictable: strategy and field live on different domains");
  return run_strategy(strategy, [&](std::size_t cell) { return field[cell]; }, modulation);
}

std::vector<TrajectoryPoint> integral_process(const StepStrategy& strategy, const IncrementSampler& sampler,
                                              const RngKey& key) {
  return integrate_predictable(strategy, sampler, key).trajectory;
}

DecoupledPair decoupled_pair(const StepStrategy& strategy, const IncrementSampler& sampler, const RngKey& key,
                             const RngKey& decoupled_key) {
  if (key.component == decoupled_key.component)
    throw std::invalid_argument("decoupled_pair: primary and decoupled keys share a stream component");
  IntegrationResult primary = integrate_predictable(strategy, sampler, key);
  DecoupledPair out;
  out.primary = primary.value;
  for (const LedgerEntry& e : primary.ledger) out.decoupled += e.coefficient * sampler.sample(e.cell, decoupled_key);
  out.ledger = std::move(primary.ledger);
  return out;
}

IntegralLaw::IntegralLaw(const CharacteristicTriplet& triplet, const GridFunction& f) : triplet_(triplet), f_(f) {
  if (!same_domain(triplet.domain(), f.domain()))
    throw std::invalid_argument("integral_law: integrand and triplet live on different domains");
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double chi = triplet.control().mass(c);
    if (chi == 0.0 || f[c] == 0.0) continue;
    const double a = a_theta(triplet, c, f[c]);
    const double z = zeta_theta(triplet, c, f[c]);
    if (!std::isfinite(a) || !std::isfinite(z)) {
      infinite_ = true;
      continue;
    }
    a_ += chi * a;
    q_ += chi * f[c] * f[c] * triplet.gaussian_density(c);
    zeta_ += chi * z;
  }
  if (infinite_) {
    a_ = kInfinity;
    zeta_ = kInfinity;
  }
}

std::optional<std::complex<double>> IntegralLaw::cf(double u) const {
  if (infinite_) return std::nullopt;
  if (u == 0.0) return std::complex<double>(1.0, 0.0);
  std::complex<double> exponent(-0.5 * u * u * q_, u * a_);
  for (std::size_t c = 0; c < f_.size(); ++c) {
    const double chi = triplet_.control().mass(c);
    if (chi == 0.0 || f_[c] == 0.0) continue;
    const LevyKernel& kernel = triplet_.kernel(c);
    if (kernel.is_zero()) continue;
    const std::complex<double> jump = kernel.cf_exponent(u * f_[c], triplet_.quadrature());
    const double shift = kernel_integral(kernel, DriftDiff{f_[c]}, triplet_.quadrature());
    if (!std::isfinite(jump.real()) || !std::isfinite(jump.imag()) || !std::isfinite(shift)) return std::nullopt;
    exponent += chi * (jump - std::complex<double>(0.0, u * shift));
  }
  return std::exp(exponent);
}

std::optional<std::complex<double>> IntegralLaw::cf_direct(double u) const {
  if (u == 0.0) return std::complex<double>(1.0, 0.0);
  std::complex<double> exponent(0.0, 0.0);
  for (std::size_t c = 0; c < f_.size(); ++c) {
    const double chi = triplet_.control().mass(c);
    const double v = u * f_[c];
    if (chi == 0.0 || v == 0.0) continue;
    const CellLaw& law = triplet_.cell(c);
    const std::complex<double> jump = law.kernel->cf_exponent(v, triplet_.quadrature());
    if (!std::isfinite(jump.real()) || !std::isfinite(jump.imag())) return std::nullopt;
    exponent += chi * (std::complex<double>(-0.5 * v * v * law.q, v * law.a) + jump);
  }
  return std::exp(exponent);
}

IntegralLaw integral_law(const GridFunction& f, const CharacteristicTriplet& triplet) {
  return IntegralLaw(triplet, f);
}

}  // namespace levybasis
