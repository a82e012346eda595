#include <catch_amalgamated.hpp>

#include "levybasis/enumeration.hpp"
#include "levybasis/integrator.hpp"
#include "levybasis/truncation.hpp"
#include "support.hpp"

using namespace levybasis;
using levybasis::testing::line;

namespace {

ToyLaw coin(std::int64_t scale = 2) { return ToyLaw{{-1, 1}, {1, 1}, scale}; }

/// Floating-point brute force of E[|sum X| ^ 1], E tau^2 and E tau over independent laws.
struct Brute {
  double lhs = 0.0;
  double tau_sq = 0.0;
  double tau = 0.0;
};

Brute brute(const std::vector<ToyLaw>& laws) {
  Brute b;
  for (const ToyLaw& l : laws) {
    double total = 0.0;
    for (auto w : l.weights) total += static_cast<double>(w);
    for (std::size_t i = 0; i < l.size(); ++i) {
      const double x = static_cast<double>(l.values[i]) / static_cast<double>(l.scale);
      const double p = static_cast<double>(l.weights[i]) / total;
      b.tau_sq += p * levybasis::tau(x) * levybasis::tau(x);
      b.tau += p * levybasis::tau(x);
    }
  }
  std::vector<std::size_t> idx(laws.size(), 0);
  while (true) {
    double p = 1.0;
    double s = 0.0;
    for (std::size_t k = 0; k < laws.size(); ++k) {
      double total = 0.0;
      for (auto w : laws[k].weights) total += static_cast<double>(w);
      p *= static_cast<double>(laws[k].weights[idx[k]]) / total;
      s += static_cast<double>(laws[k].values[idx[k]]) / static_cast<double>(laws[k].scale);
    }
    b.lhs += p * std::min(std::abs(s), 1.0);
    std::size_t k = 0;
    while (k < laws.size() && ++idx[k] == laws[k].size()) idx[k++] = 0;
    if (k == laws.size()) break;
  }
  return b;
}

}  // namespace

TEST_CASE("exact rational conversion of doubles") {
  CHECK(exact_rational(0.5) == Rational(1, 2));
  CHECK(exact_rational(-3.0) == Rational(-3));
  CHECK(exact_rational(0.1) == Rational(3602879701896397LL, 36028797018963968LL));
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen);
    CHECK(to_double(exact_rational(x)) == x);
  }
  CHECK_THROWS(exact_rational(std::nan("")));
}

TEST_CASE("exact truncation helpers") {
  CHECK(exact_tau(Rational(3, 2)) == 1);
  CHECK(exact_tau(Rational(-7, 3)) == -1);
  CHECK(exact_tau(Rational(-1, 3)) == Rational(-1, 3));
  CHECK(abs_min_one(Rational(-1, 4)) == Rational(1, 4));
  CHECK(abs_min_one(Rational(5)) == 1);
}

TEST_CASE("toy law validation and moments") {
  const ToyLaw l{{-4, 1, 6}, {1, 2, 1}, 3};
  l.validate();
  CHECK(l.probability(1) == Rational(1, 2));
  CHECK(l.value(0) == Rational(-4, 3));
  CHECK(l.tau_mean() == Rational(1, 4) * -1 + Rational(1, 2) * Rational(1, 3) + Rational(1, 4) * 1);
  CHECK_THROWS((ToyLaw{{1}, {0}, 1}).validate());
  CHECK_THROWS((ToyLaw{{1, 2}, {1}, 1}).validate());
  CHECK_THROWS((ToyLaw{{1}, {1}, 0}).validate());
  CHECK_THROWS((ToyLaw{{1}, {-1}, 1}).validate());
}

TEST_CASE("sum control agrees with a floating-point brute force and holds") {
  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<ToyLaw> laws;
    const std::size_t n = 1 + gen() % 5;
    for (std::size_t k = 0; k < n; ++k) {
      ToyLaw l;
      l.scale = 1 + static_cast<std::int64_t>(gen() % 8);
      const std::size_t atoms = 1 + gen() % 3;
      for (std::size_t a = 0; a < atoms; ++a) {
        l.values.push_back(static_cast<std::int64_t>(gen() % 41) - 20);
        l.weights.push_back(1 + static_cast<std::int64_t>(gen() % 5));
      }
      laws.push_back(l);
    }
    const SumControlExact s = sum_control_exact(laws);
    const Brute b = brute(laws);
    CHECK(std::abs(to_double(s.lhs) - b.lhs) < 1e-12);
    CHECK(std::abs(to_double(s.tau_sq_sum) - b.tau_sq) < 1e-12);
    CHECK(std::abs(to_double(s.tau_sum) - b.tau) < 1e-12);
    const double rhs = std::sqrt(b.tau_sq + b.tau * b.tau) + b.tau_sq;
    CHECK(std::abs(s.rhs_value - rhs) < 1e-12);
    CHECK(s.holds);
    CHECK(s.holds == (b.lhs <= rhs + 1e-12));
  }
}

TEST_CASE("sum control on a symmetric coin is tight only where expected") {
  const SumControlExact s = sum_control_exact({ToyLaw{{-1, 1}, {1, 1}, 1}});
  CHECK(s.lhs == 1);
  CHECK(s.tau_sq_sum == 1);
  CHECK(s.tau_sum == 0);
  CHECK(s.holds);
}

TEST_CASE("tangency holds for predictable strategies on toy fields") {
  const auto d = line(3);
  const ToyField toy{{coin(), ToyLaw{{-2, 0, 3}, {1, 1, 2}, 2}, coin(4)}};
  for (const StepStrategy& s : {StepStrategy::uniform(d, 1.0), StepStrategy::uniform(d, rules::sign_of_past_sum()),
                                StepStrategy::uniform(d, rules::threshold(2.0, 0.75))}) {
    const TangencyExact t = tangency_exact(s, toy);
    CHECK(t.equal);
    CHECK(t.conditions_checked > 0);
    CHECK(t.mismatch.empty());
  }
}

TEST_CASE("decoupling on the sign strategy matches a hand computation") {
  const auto d = line(2);
  const ToyField toy{{coin(), coin()}};
  const DecouplingExact r = decoupling_exact(StepStrategy::uniform(d, rules::sign_of_past_sum()), toy);
  CHECK(r.ex == Rational(1, 2));
  CHECK(r.ey == Rational(1, 2));
  CHECK(r.max_sign == Rational(1, 2));
  CHECK(r.r1 == 1.0);
  CHECK(r.r2 == 1.0);
  CHECK(r.finite);
}

TEST_CASE("decoupling of deterministic strategies is an identity in law") {
  const auto d = line(3);
  const ToyField toy{{coin(), ToyLaw{{-3, 1}, {1, 3}, 2}, coin(1)}};
  const GridFunction f(d, {1.0, -0.5, 2.0});
  const DecouplingExact r = decoupling_exact(StepStrategy::from_grid_function(f), toy);
  CHECK(r.ex == r.ey);
  CHECK(r.ey <= r.max_sign);
}

TEST_CASE("maximal inequality holds exactly with stopped sign patterns") {
  const auto d = line(3);
  const ToyField toy{{coin(), ToyLaw{{-3, 1}, {1, 3}, 2}, coin(1)}};
  const std::vector<double> levels{0.5, 1.0, 1.5};
  for (const StepStrategy& s : {StepStrategy::uniform(d, 1.0), StepStrategy::uniform(d, rules::sign_of_past_sum())}) {
    const GammaFamily fam = GammaFamily::standard(3, levels);
    const MaximalExact m = maximal_inequality_exact(s, toy, fam, levels);
    CHECK(m.holds);
    CHECK(m.worst_margin >= 0.0);
    CHECK(m.comparisons == fam.size() * levels.size());
  }
}

TEST_CASE("maximal inequality with the identity family alone can fail") {
  const auto d = line(2);
  const ToyField toy{{coin(1), coin(1)}};
  const MaximalExact m =
      maximal_inequality_exact(StepStrategy::uniform(d, 1.0), toy, GammaFamily::identity(), {1.0});
  CHECK_FALSE(m.holds);
  CHECK(m.worst_margin == -0.5);
}
