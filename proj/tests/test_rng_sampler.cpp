#include <catch_amalgamated.hpp>

#include <complex>
#include <set>

#include "levybasis/families.hpp"
#include "levybasis/rng.hpp"
#include "levybasis/sampler.hpp"
#include "support.hpp"

using namespace levybasis;
using levybasis::testing::line;
using cd = std::complex<double>;

namespace {

cd empirical(const std::vector<double>& xs, double u) {
  cd s = 0.0;
  for (double x : xs) s += std::exp(cd(0.0, u * x));
  return s / static_cast<double>(xs.size());
}

std::vector<double> draws(const IncrementSampler& s, std::size_t cell, std::uint64_t seed, std::size_t n) {
  std::vector<double> xs(n);
  const RngKey key{seed, kFirstUserComponent, 0, 0};
  for (std::size_t r = 0; r < n; ++r) xs[r] = s.sample(cell, key.with_replicate(r));
  return xs;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and keyed") {
  const RngKey key{42, kPrimaryComponent, 3, 9};
  RngStream a(key);
  RngStream b(key);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  std::set<std::uint64_t> firsts;
  for (const RngKey k : {key, key.with_cell(4), key.with_replicate(10), key.with_component(kDecoupledComponent),
                         RngKey{43, kPrimaryComponent, 3, 9}}) {
    RngStream s(k);
    firsts.insert(s());
  }
  CHECK(firsts.size() == 5);
  CHECK(key.with_cell(5).cell == 5);
  CHECK(key.with_replicate(2).replicate == 2);
}

TEST_CASE("uniform variates lie in (0, 1) with the right moments") {
  RngStream s(RngKey{1, kFirstUserComponent, 0, 0});
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - 1.0 / 3.0) < 5.0 * std::sqrt(4.0 / 45.0 / n));
}

TEST_CASE("Poisson increments are counts with the right mean") {
  const auto d = line(2);
  const CharacteristicTriplet t = families::poisson(d, 3.0);
  const IncrementSampler s(t);
  CHECK(s.plan(0).exact);
  CHECK(s.bias_budget({0, 1}, 2.0) == 0.0);
  const auto xs = draws(s, 1, 5, 40000);
  double sum = 0.0;
  for (double x : xs) {
    CHECK(x == std::round(x));
    CHECK(x >= 0.0);
    sum += x;
  }
  const double lambda = 1.5;
  CHECK(std::abs(sum / xs.size() - lambda) < 5.0 * std::sqrt(lambda / xs.size()));
}

TEST_CASE("Gaussian increments have variance q chi") {
  const auto d = line(1);
  const CharacteristicTriplet t = families::gaussian(d, 2.0, 0.8);
  const auto xs = draws(IncrementSampler(t), 0, 6, 40000);
  double sq = 0.0;
  for (double x : xs) sq += x * x;
  const double var = 1.6;
  CHECK(std::abs(sq / xs.size() - var) < 5.0 * var * std::sqrt(2.0 / xs.size()));
}

TEST_CASE("stable increments match the Levy-Khintchine CF") {
  const auto d = line(1);
  const std::size_t n = 20000;
  for (double p : {0.5, 1.5}) {
    const CharacteristicTriplet t = families::stable(d, p, 0.7, 0.3, 1.0);
    const IncrementSampler s(t);
    const auto xs = draws(s, 0, 8, n);
    std::vector<double> exact(n);
    for (std::size_t r = 0; r < n; ++r) exact[r] = sample_stable_exact(t, 0, RngKey{9, kFirstUserComponent, 0, r});
    for (double u : {-3.0, -1.0, 0.5, 2.0}) {
      const cd target = *levy_khintchine_cf(t, {0}, u);
      CHECK(std::abs(empirical(xs, u) - target) < 5.0 / std::sqrt(double(n)) + s.bias_budget({0}, u));
      CHECK(std::abs(empirical(exact, u) - target) < 5.0 / std::sqrt(double(n)));
    }
  }
}

TEST_CASE("truncation plan respects the jump cap") {
  const auto d = line(1);
  SamplerOptions opts;
  opts.max_expected_jumps = 50.0;
  const CharacteristicTriplet t = families::stable(d, 1.5, 0.5, 0.5, 1.0);
  const TruncationPlan plan = truncation_plan(t, 0, opts);
  CHECK(plan.jump_rate <= 50.0 * (1.0 + 1e-9));
  CHECK(plan.epsilon >= opts.epsilon);
  CHECK_FALSE(plan.exact);
  CHECK(plan.bias_budget(1.0) > 0.0);
  CHECK(plan.bias_budget(2.0) >= plan.bias_budget(1.0));
}

TEST_CASE("fields are reproducible and the decoupled copy is a different stream") {
  const auto d = line(6);
  const CharacteristicTriplet t = families::compensated_poisson(d, 2.0);
  const IncrementSampler s(t);
  const RngKey key{11, kPrimaryComponent, 0, 0};
  const IncrementField a = sample_field(s, key);
  const IncrementField b = sample_field(s, key);
  CHECK(a.values() == b.values());
  CHECK_FALSE(a.decoupled());
  const IncrementField c = sample_decoupled_field(s, key);
  CHECK(c.decoupled());
  CHECK(c.values() != a.values());
  CHECK(a.sum({1, 3}) == a[1] + a[3]);
  for (std::size_t cell = 0; cell < 6; ++cell) CHECK(a[cell] == s.sample(cell, key));
}

TEST_CASE("convolution roots sum to the law of the whole") {
  const auto d = line(1);
  const CharacteristicTriplet t = families::compensated_poisson(d, 1.0);
  const std::size_t n = 4000;
  for (unsigned m : {0u, 3u}) {
    std::vector<double> sums(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto parts = convolution_root_field(t, {0}, m, RngKey{13, kFirstUserComponent, 0, r});
      REQUIRE(parts.size() == (std::size_t{1} << m));
      double s = 0.0;
      for (double x : parts) s += x;
      sums[r] = s;
    }
    for (double u : {-1.0, 0.7, 2.0})
      CHECK(std::abs(empirical(sums, u) - *levy_khintchine_cf(t, {0}, u)) < 5.0 / std::sqrt(double(n)));
  }
}
