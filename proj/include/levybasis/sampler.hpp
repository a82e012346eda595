#pragma once

#include <cstdint>
#include <vector>

#include "levybasis/rng.hpp"
#include "levybasis/triplet.hpp"

namespace levybasis {

struct SamplerOptions {
  /// Jumps smaller than epsilon (stable and tabulated kernels) are replaced by a Gaussian.
  double epsilon = 1e-3;
  /// Epsilon is raised until the expected number of jumps per draw is at most this.
  double max_expected_jumps = 1000.0;
};

/// How one cell's increment is assembled: drift + Gaussian + compound Poisson of large jumps
/// + Gaussian substitute for the small jumps. All quantities already include chi(cell).
struct TruncationPlan {
  double epsilon = 0.0;
  double drift = 0.0;
  double gaussian_variance = 0.0;
  double small_jump_variance = 0.0;
  double jump_rate = 0.0;
  /// Small-jump moments |int b^3|, int b^4, int |b|^5 over {|b| < epsilon}.
  double third_moment = 0.0;
  double fourth_moment = 0.0;
  double fifth_moment = 0.0;
  bool exact = true;
  JumpTable table;
  /// Atoms sampled exactly: (location, chi * weight).
  std::vector<Atom> atoms;

  /// Bound on |empirical-law CF - target CF| caused by the small-jump substitution at u.
  double bias_budget(double u) const;
};

TruncationPlan truncation_plan(const CharacteristicTriplet& triplet, std::size_t cell,
                               const SamplerOptions& options = {});

/// Sum of the per-cell bias budgets over A.
double cf_bias_budget(const CharacteristicTriplet& triplet, const CellSet& cells, double u,
                      const SamplerOptions& options = {});

/// Precomputed plans for every cell of a triplet; the workhorse behind the free functions.
class IncrementSampler {
 public:
  explicit IncrementSampler(const CharacteristicTriplet& triplet, SamplerOptions options = {});

  double sample(std::size_t cell, const RngKey& key) const;
  const TruncationPlan& plan(std::size_t cell) const { return plans_.at(cell); }
  const CharacteristicTriplet& triplet() const { return triplet_; }
  double bias_budget(const CellSet& cells, double u) const;

 private:
  CharacteristicTriplet triplet_;
  std::vector<TruncationPlan> plans_;
};

/// One draw of Theta(cell) from the substream key.with_cell(cell).
double sample_increment(const CharacteristicTriplet& triplet, std::size_t cell, const RngKey& key,
                        const SamplerOptions& options = {});

/// Exact draw for cells with a stable kernel by the Chambers-Mallows-Stuck transform.
double sample_stable_exact(const CharacteristicTriplet& triplet, std::size_t cell, const RngKey& key);

/// One realization {Theta(cell)} over all cells of the domain.
class IncrementField {
 public:
  IncrementField(DomainPtr domain, std::vector<double> values, RngKey key, bool decoupled);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t c) const { return values_[c]; }
  std::size_t size() const { return values_.size(); }
  const RngKey& key() const { return key_; }
  bool decoupled() const { return decoupled_; }

  /// Increment of a union of cells.
  double sum(const CellSet& cells) const;

 private:
  DomainPtr domain_;
  std::vector<double> values_;
  RngKey key_;
  bool decoupled_;
};

IncrementField sample_field(const IncrementSampler& sampler, const RngKey& key);
IncrementField sample_field(const CharacteristicTriplet& triplet, const RngKey& key,
                            const SamplerOptions& options = {});
/// Independent copy drawn from the reserved decoupled component.
IncrementField sample_decoupled_field(const IncrementSampler& sampler, const RngKey& key);

/// 2^m i.i.d. draws of Theta(A) with chi scaled by 2^{-m}; their sum has the law of Theta(A).
std::vector<double> convolution_root_field(const CharacteristicTriplet& triplet, const CellSet& cells, unsigned m,
                                           const RngKey& key, const SamplerOptions& options = {});

}  // namespace levybasis
