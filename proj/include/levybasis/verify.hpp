#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "levybasis/enumeration.hpp"
#include "levybasis/integrator.hpp"
#include "levybasis/modular.hpp"
#include "levybasis/sampler.hpp"

namespace levybasis {

/// Outcome of one experiment: pass == (statistic <= tolerance && failed_checks == 0).
struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, double>> stats;
  double statistic = 0.0;
  double tolerance = 0.0;
  /// Side conditions (monotonicity, root bracketing, ...) that failed.
  std::size_t failed_checks = 0;
  bool pass = false;
  /// Relies on a finite-family lower bound for a supremum.
  bool indicative = false;
  std::string note;
  /// Wall-clock seconds; kept out of every serialized artifact.
  double runtime_seconds = 0.0;

  double stat(const std::string& key) const;
  void add_param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
  void add_param(const std::string& key, double value);
  void add_stat(const std::string& key, double value) { stats.emplace_back(key, value); }
  void check(bool ok, const std::string& what);
  /// Sets pass from statistic, tolerance and failed_checks.
  void finish();
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  double tolerance_scale = 1.0;
  unsigned workers = 1;
  SamplerOptions sampler;
};

/// 20 evenly spaced points in [-5, 5].
std::vector<double> default_u_grid();

std::complex<double> empirical_cf(const std::vector<double>& draws, double u);

ExperimentReport cf_match(const std::string& name, const CharacteristicTriplet& triplet, const CellSet& cells,
                          std::size_t replicates, const std::vector<double>& u_grid, const VerifyOptions& options);

/// Same comparison for the exact stable transform.
ExperimentReport cf_match_stable_exact(const std::string& name, const CharacteristicTriplet& triplet, std::size_t cell,
                                       std::size_t replicates, const std::vector<double>& u_grid,
                                       const VerifyOptions& options);

ExperimentReport integral_law_check(const std::string& name, const CharacteristicTriplet& triplet, const GridFunction& f,
                                    std::size_t replicates, const std::vector<double>& u_grid,
                                    const VerifyOptions& options);

ExperimentReport sum_control_check(const std::string& name, const std::vector<std::vector<ToyLaw>>& tuples);

/// Random tuples of 1..max_n independent laws with 1..3 atoms.
std::vector<std::vector<ToyLaw>> random_toy_tuples(std::size_t count, std::size_t max_n, std::uint64_t seed);

ExperimentReport drift_sup_check(const std::string& name, const CharacteristicTriplet& triplet, const GridFunction& f,
                                 const VerifyOptions& options);

struct PartitionDepth {
  unsigned depth = 0;
  double tau_sum = 0.0;
  double tau_sq_sum = 0.0;
};

/// Exact per-depth sums of E tau(d) and E tau(d)^2 over the 2^m convolution roots of Theta(A).
/// Supported laws: one atom kernel without Gaussian part, or a purely Gaussian cell set.
std::vector<PartitionDepth> partition_sums(const CharacteristicTriplet& triplet, const CellSet& cells,
                                           unsigned max_depth);

ExperimentReport partition_limit_report(const std::string& name, const CharacteristicTriplet& triplet,
                                        const CellSet& cells, unsigned max_depth, std::size_t replicates,
                                        double tolerance, const VerifyOptions& options);

struct ToyCase {
  std::string label;
  StepStrategy strategy;
  ToyField toy;
};

ExperimentReport tangency_exact_report(const std::string& name, const std::vector<ToyCase>& toys);
ExperimentReport decoupling_exact_report(const std::string& name, const std::vector<ToyCase>& toys);
ExperimentReport decoupling_report(const std::string& name, const StepStrategy& strategy,
                                   const CharacteristicTriplet& triplet, std::size_t replicates, std::size_t seeds,
                                   const VerifyOptions& options);

ExperimentReport maximal_inequality_exact_report(const std::string& name, const std::vector<ToyCase>& toys,
                                                 const std::vector<double>& c_grid);
ExperimentReport maximal_inequality_check(const std::string& name, const StepStrategy& strategy,
                                          const CharacteristicTriplet& triplet, const std::vector<double>& c_grid,
                                          std::size_t replicates, const VerifyOptions& options);

enum class ApproximationScheme { truncate, scale };

struct DominatedConvergenceSeries {
  std::vector<double> k;
  std::vector<double> norm;
  std::vector<double> emery;
  std::size_t domination_violations = 0;
};

DominatedConvergenceSeries dominated_convergence_series(const StepStrategy& strategy,
                                                        const std::function<double(double)>& dominating,
                                                        ApproximationScheme scheme,
                                                        const CharacteristicTriplet& triplet,
                                                        const std::vector<double>& k_grid, std::size_t replicates,
                                                        const VerifyOptions& options);

/// Pass: domination holds cellwise; for the scale scheme (and `require_exact_zero` unset)
/// both final values fall below `tolerance`, the norm series is nonincreasing; with
/// `require_exact_zero` both final values must be exactly 0.
ExperimentReport dominated_convergence_report(const std::string& name, const StepStrategy& strategy,
                                              const std::function<double(double)>& dominating,
                                              ApproximationScheme scheme, const CharacteristicTriplet& triplet,
                                              const std::vector<double>& k_grid, std::size_t replicates,
                                              double tolerance, bool require_exact_zero, const VerifyOptions& options);

ExperimentReport norm_integral_equivalence(const std::string& name, const std::vector<StepStrategy>& sequence,
                                           const CharacteristicTriplet& triplet, std::size_t replicates,
                                           double tolerance, bool expect_decay, const VerifyOptions& options);

/// Realized coefficients of one run as a grid function (0 off the strategy).
GridFunction realized_integrand(const StepStrategy& strategy, const IntegrationResult& run);

ExperimentReport modular_closed_form_check(const std::string& name, std::size_t functions, const VerifyOptions& options);
ExperimentReport eta_identity_check(const std::string& name, std::size_t points, const VerifyOptions& options);
ExperimentReport fnorm_root_check(const std::string& name, const VerifyOptions& options);
ExperimentReport delta2_check(const std::string& name, std::size_t pairs, const VerifyOptions& options);

/// Names of the experiments in the full suite, in run order.
std::vector<std::string> experiment_names();
/// Runs one named experiment of the suite; throws std::invalid_argument for unknown names.
ExperimentReport run_experiment(const std::string& name, const VerifyOptions& options);
std::vector<ExperimentReport> run_suite(const VerifyOptions& options);

}  // namespace levybasis
