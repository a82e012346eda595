#include <catch_amalgamated.hpp>

#include "levybasis/truncation.hpp"
#include "support.hpp"

using namespace levybasis;
using levybasis::testing::line;

TEST_CASE("tau is the identity on [-1, 1] and the sign outside") {
  CHECK(tau(0.0) == 0.0);
  CHECK(tau(0.25) == 0.25);
  CHECK(tau(-1.0) == -1.0);
  CHECK(tau(1.0) == 1.0);
  CHECK(tau(3.5) == 1.0);
  CHECK(tau(-1e300) == -1.0);
}

TEST_CASE("tau properties on random inputs") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> exponent(-6.0, 6.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = (gen() & 1 ? 1.0 : -1.0) * std::pow(10.0, exponent(gen));
    const double t = tau(x);
    CHECK(std::abs(t) <= 1.0);
    CHECK(tau(-x) == -t);
    CHECK(std::abs(t) == std::min(std::abs(x), 1.0));
    CHECK(t * x >= 0.0);
  }
}

TEST_CASE("divergence budget") {
  CHECK(is_divergent(kInfinity));
  CHECK(is_divergent(std::nan("")));
  CHECK(is_divergent(2e300));
  CHECK_FALSE(is_divergent(1e299));
}

TEST_CASE("cells are enumerated time-major") {
  const Domain d({0.0, 0.5, 2.0}, {Box{{0.0}, {1.0}}, Box{{1.0}, {4.0}}, Box{{-2.0}, {0.0}}});
  REQUIRE(d.time_intervals() == 2);
  REQUIRE(d.box_count() == 3);
  REQUIRE(d.cell_count() == 6);
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t b = 0; b < 3; ++b) {
      const std::size_t i = d.cell_index(t, b);
      CHECK(i == t * 3 + b);
      const CellRef ref = d.cell(i);
      CHECK(ref.time_index == t);
      CHECK(ref.box == b);
      CHECK(ref.t_start == d.time_grid()[t]);
      CHECK(ref.t_end == d.time_grid()[t + 1]);
    }
  }
  CHECK(d.cell_volume(d.cell_index(1, 1)) == 1.5 * 3.0);
  CHECK_THROWS_AS(d.cell(6), std::out_of_range);
  CHECK_THROWS_AS(d.cell_index(2, 0), std::out_of_range);
}

TEST_CASE("invalid domains are rejected") {
  const std::vector<Box> unit{Box{{0.0}, {1.0}}};
  CHECK_THROWS_AS(Domain({0.0}, unit), std::invalid_argument);
  CHECK_THROWS_AS(Domain({0.1, 1.0}, unit), std::invalid_argument);
  CHECK_THROWS_AS(Domain({0.0, 1.0, 1.0}, unit), std::invalid_argument);
  CHECK_THROWS_AS(Domain({0.0, 1.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Domain({0.0, 1.0}, {Box{{0.0}, {0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(Domain({0.0, 1.0}, {Box{{0.0}, {2.0}}, Box{{1.0}, {3.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(Domain::uniform_time(0.0, 3), std::invalid_argument);
}

TEST_CASE("uniform time grid") {
  const Domain d = Domain::uniform_time(2.0, 4);
  CHECK(d.time_grid() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(d.horizon() == 2.0);
  CHECK(d.cell_count() == 4);
}

TEST_CASE("control measure masses are density times volume") {
  const auto d = line(4, 2.0);
  const ControlMeasure chi(*d, {1.0, 2.0, 0.0, 4.0});
  CHECK(chi.mass(0) == 0.5);
  CHECK(chi.mass(1) == 1.0);
  CHECK(chi.mass(2) == 0.0);
  const std::vector<std::size_t> cells{0, 3};
  CHECK(chi.mass(cells) == 2.5);
  CHECK(chi.scaled(0.25).mass(3) == 0.5);
  CHECK_THROWS_AS(ControlMeasure(*d, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ControlMeasure(*d, {1.0, -1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("cell sets are sorted and unique") {
  const auto d = line(5);
  CHECK(make_cell_set(*d, {3, 1, 3, 0}) == CellSet{0, 1, 3});
  CHECK(all_cells(*d) == CellSet{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(make_cell_set(*d, {5}), std::out_of_range);
}
