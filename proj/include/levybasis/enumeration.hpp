#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "levybasis/integrator.hpp"
#include "levybasis/strategy.hpp"

namespace levybasis {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double.
Rational exact_rational(double x);
double to_double(const Rational& r);

/// Finite law on values[i] / scale with probabilities weights[i] / sum(weights).
struct ToyLaw {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> weights;
  std::int64_t scale = 1;

  void validate() const;
  std::size_t size() const { return values.size(); }
  Rational value(std::size_t i) const;
  Rational probability(std::size_t i) const;
  Rational tau_mean() const;
  Rational tau_sq_mean() const;
};

Rational exact_tau(const Rational& x);
Rational abs_min_one(const Rational& x);

/// Calls fn(indices, probability) for every outcome of independent draws from `laws`.
template <class Fn>
void for_each_outcome(const std::vector<ToyLaw>& laws, Fn&& fn) {
  std::vector<std::size_t> idx(laws.size(), 0);
  std::vector<Rational> probs(laws.size());
  for (std::size_t k = 0; k < laws.size(); ++k) probs[k] = 0;
  while (true) {
    Rational p = 1;
    for (std::size_t k = 0; k < laws.size(); ++k) p *= laws[k].probability(idx[k]);
    fn(static_cast<const std::vector<std::size_t>&>(idx), p);
    std::size_t k = 0;
    while (k < laws.size() && ++idx[k] == laws[k].size()) idx[k++] = 0;
    if (k == laws.size()) break;
  }
}

struct SumControlExact {
  Rational lhs;
  Rational tau_sq_sum;
  Rational tau_sum;
  bool holds = false;
  double lhs_value = 0.0;
  double rhs_value = 0.0;
};

/// E[|sum X| ^ 1] against (sum E tau^2 + (sum E tau)^2)^{1/2} + sum E tau^2, compared exactly.
SumControlExact sum_control_exact(const std::vector<ToyLaw>& laws);

/// Toy space for step strategies: laws[c] is the law of Theta(c) for every cell of the
/// strategy's domain; cells are independent.
struct ToyField {
  std::vector<ToyLaw> laws;
};

struct TangencyExact {
  bool equal = false;
  std::size_t conditions_checked = 0;
  std::string mismatch;
};

/// Compares the conditional laws of X_k = sum psi Theta and Y_k = sum psi Theta' given the joint
/// past of both fields, for every block and every past outcome.
TangencyExact tangency_exact(const StepStrategy& strategy, const ToyField& toy);

struct DecouplingExact {
  Rational ex;
  Rational ey;
  Rational max_sign;
  /// ex / ey and ey / max_sign; 0 when both sides vanish, +infinity when only the denominator does.
  double r1 = 0.0;
  double r2 = 0.0;
  bool finite = false;
};

DecouplingExact decoupling_exact(const StepStrategy& strategy, const ToyField& toy);

struct MaximalExact {
  bool holds = false;
  std::size_t comparisons = 0;
  /// min over (member, c) of rhs - lhs.
  double worst_margin = 0.0;
  std::string worst_case;
};

/// P(sup_t |int Gamma Xi| >= c) <= max over the family of P(|int_T Gamma' Xi| >= c), exactly.
MaximalExact maximal_inequality_exact(const StepStrategy& strategy, const ToyField& toy, const GammaFamily& family,
                                      const std::vector<double>& c_grid);

}  // namespace levybasis
