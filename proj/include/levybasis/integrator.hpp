#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levybasis/modular.hpp"
#include "levybasis/rng.hpp"
#include "levybasis/sampler.hpp"
#include "levybasis/strategy.hpp"

namespace levybasis {

/// Returns Theta(cell); called once per cell in time order.
using IncrementSource = std::function<double(std::size_t cell)>;

/// Bounded predictable multiplier: block position and the effective past -> gamma with |gamma| <= 1.
struct GammaMember {
  std::string label;
  std::function<double(std::size_t block, const PastLedger& past)> multiplier;
};

/// Finite stand-in for the bounded predictable multipliers. Sup quantities over it are lower bounds.
class GammaFamily {
 public:
  explicit GammaFamily(std::vector<GammaMember> members);

  /// All sign patterns when blocks <= 12 (deterministic patterns otherwise), each also
  /// stopped once the running integral reaches a level in `stop_levels`.
  static GammaFamily standard(std::size_t blocks, const std::vector<double>& stop_levels = {});
  /// Only the constant multiplier 1.
  static GammaFamily identity();

  const std::vector<GammaMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<GammaMember> members_;
};

/// Integrated coefficient = gamma(block, effective past) * pointwise(base coefficient).
struct Modulation {
  std::function<double(double)> pointwise;
  const GammaMember* gamma = nullptr;
};

struct TrajectoryPoint {
  double t;
  double value;
};

struct IntegrationResult {
  double value = 0.0;
  std::vector<LedgerEntry> ledger;
  /// Value after each block, starting with (0, 0).
  std::vector<TrajectoryPoint> trajectory;

  double running_max() const;
};

/// Core engine: runs the blocks in time order against the given increments.
IntegrationResult run_strategy(const StepStrategy& strategy, const IncrementSource& increments,
                               const Modulation& modulation = {});

double integrate_simple(const GridFunction& f, const IncrementField& field);

IntegrationResult integrate_predictable(const StepStrategy& strategy, const IncrementSampler& sampler, const RngKey& key,
                                        const Modulation& modulation = {});
IntegrationResult integrate_predictable(const StepStrategy& strategy, const CharacteristicTriplet& triplet,
                                        const RngKey& key, const SamplerOptions& options = {});
IntegrationResult integrate_predictable(const StepStrategy& strategy, const IncrementField& field,
                                        const Modulation& modulation = {});

std::vector<TrajectoryPoint> integral_process(const StepStrategy& strategy, const IncrementSampler& sampler,
                                              const RngKey& key);

struct DecoupledPair {
  double primary = 0.0;
  double decoupled = 0.0;
  std::vector<LedgerEntry> ledger;
};

/// Same coefficients (driven by the primary past) against Theta and an independent copy.
DecoupledPair decoupled_pair(const StepStrategy& strategy, const IncrementSampler& sampler, const RngKey& key,
                             const RngKey& decoupled_key);

/// Law of the deterministic integral of f.
class IntegralLaw {
 public:
  IntegralLaw(const CharacteristicTriplet& triplet, const GridFunction& f);

  double a() const { return a_; }
  double q() const { return q_; }
  /// Integral of zeta_Theta(r, f(r)) against chi.
  double zeta_functional() const { return zeta_; }
  bool infinite() const { return infinite_; }

  /// Built from a_I, q_I and the per-cell jump part of the image Levy measure.
  std::optional<std::complex<double>> cf(double u) const;
  /// Product of the per-cell CFs of f(c) Theta(c), for comparison.
  std::optional<std::complex<double>> cf_direct(double u) const;

 private:
  CharacteristicTriplet triplet_;
  GridFunction f_;
  double a_ = 0.0;
  double q_ = 0.0;
  double zeta_ = 0.0;
  bool infinite_ = false;
};

IntegralLaw integral_law(const GridFunction& f, const CharacteristicTriplet& triplet);

}  // namespace levybasis
