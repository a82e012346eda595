#include <catch_amalgamated.hpp>

#include "levybasis/families.hpp"
#include "levybasis/modular.hpp"
#include "levybasis/truncation.hpp"
#include "support.hpp"

using namespace levybasis;
using levybasis::testing::close;
using levybasis::testing::line;

namespace {

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = (gen() & 1 ? 1.0 : -1.0) * std::pow(10.0, e(gen));
  return v;
}

CharacteristicTriplet random_triplet(std::mt19937_64& gen, const DomainPtr& d) {
  std::uniform_real_distribution<double> u(0.05, 3.0);
  std::vector<CellLaw> cells;
  for (std::size_t c = 0; c < d->cell_count(); ++c) {
    CellLaw law;
    law.a = u(gen) - 1.5;
    law.q = (gen() % 3 == 0) ? 0.0 : u(gen);
    const int kind = static_cast<int>(gen() % 3);
    if (kind == 0) {
      law.kernel = std::make_shared<LevyKernel>(LevyKernel::atoms({{u(gen), u(gen)}, {-u(gen), u(gen)}}));
    } else if (kind == 1) {
      const double p = (gen() & 1) ? 0.3 + 0.6 * u(gen) / 3.0 : 1.1 + 0.8 * u(gen) / 3.0;
      const double x = u(gen) / 3.0;
      law.kernel = std::make_shared<LevyKernel>(LevyKernel::stable(p, x, 1.0 - x));
    } else {
      law.kernel = std::make_shared<LevyKernel>(LevyKernel::zero());
    }
    cells.push_back(law);
  }
  std::vector<double> density(d->cell_count());
  for (double& x : density) x = u(gen);
  return CharacteristicTriplet(d, ControlMeasure(*d, density), cells);
}

}  // namespace

TEST_CASE("Poisson modular equals sum of (f^2 ^ 1) + (|f| ^ 1) against a0") {
  const auto d = line(5, 2.0);
  const double lambda = 1.7;
  const CharacteristicTriplet t = families::poisson(d, lambda);
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 50; ++rep) {
    const GridFunction f(d, random_values(gen, 5));
    double expect = 0.0;
    for (std::size_t c = 0; c < 5; ++c) {
      const double a = std::abs(f[c]);
      expect += (std::min(a * a, 1.0) + std::min(a, 1.0)) * lambda * 0.4;
    }
    CHECK(close(modular_value(t, f), expect, 1e-10));
    CHECK(close(closed_form_modular(ExampleFamily::poisson, t, f), expect, 1e-12));
  }
}

TEST_CASE("compensated Poisson modular") {
  const auto d = line(4);
  const CharacteristicTriplet t = families::compensated_poisson(d, 0.6);
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 50; ++rep) {
    const GridFunction f(d, random_values(gen, 4));
    double expect = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      const double a = std::abs(f[c]);
      expect += (std::min(a * a, 1.0) + std::max(a - 1.0, 0.0)) * 0.6 * 0.25;
    }
    CHECK(close(modular_value(t, f), expect, 1e-10));
  }
}

TEST_CASE("stable modular has coefficients 2/(2-p) and |x-y|/|1-p|") {
  const auto d = line(3);
  std::mt19937_64 gen(9);
  for (double p : {0.4, 0.9, 1.3, 1.8}) {
    for (double x : {0.5, 0.8, 0.05}) {
      const double y = 1.0 - x;
      const double rho = 1.3;
      const CharacteristicTriplet t = families::stable(d, p, x, y, rho);
      const double coef = 2.0 / (2.0 - p) + std::abs(x - y) / std::abs(1.0 - p);
      for (int rep = 0; rep < 5; ++rep) {
        const GridFunction f(d, random_values(gen, 3));
        double expect = 0.0;
        for (std::size_t c = 0; c < 3; ++c) expect += coef * std::pow(std::abs(f[c]), p) * rho / 3.0;
        CHECK(close(modular_value(t, f), expect, 1e-8));
      }
      for (double alpha : {0.01, 1.0, 30.0}) {
        CHECK(close(zeta_theta(t, 0, alpha), 2.0 / (2.0 - p) * std::pow(alpha, p), 1e-10));
        CHECK(close(eta_theta(t, 0, alpha), std::abs(x - y) / std::abs(1.0 - p) * std::pow(alpha, p), 1e-9, 1e-14));
      }
    }
  }
}

TEST_CASE("compensated Poisson eta is max(|alpha| - 1, 0)") {
  const auto d = line(1);
  const CharacteristicTriplet t = families::compensated_poisson(d, 1.0);
  for (double alpha = -6.0; alpha <= 6.0; alpha += 0.0625) {
    const double expect = std::max(std::abs(alpha) - 1.0, 0.0);
    CHECK(std::abs(eta_theta(t, 0, alpha) - expect) <= 1e-12);
    CHECK(std::abs(eta_theta_search(t, 0, alpha).value - expect) <= 1e-10);
  }
}

TEST_CASE("drift, zeta and eta properties on random triplets") {
  std::mt19937_64 gen(17);
  const auto d = line(4);
  for (int rep = 0; rep < 40; ++rep) {
    const CharacteristicTriplet t = random_triplet(gen, d);
    for (std::size_t c = 0; c < 4; ++c) {
      double prev_zeta = 0.0;
      double prev_eta = 0.0;
      for (double alpha : {0.0, 0.01, 0.3, 1.0, 2.5, 10.0, 100.0}) {
        const double a = a_theta(t, c, alpha);
        CHECK(close(a_theta(t, c, -alpha), -a, 1e-12, 1e-14));
        const double z = zeta_theta(t, c, alpha);
        const DriftSup eta = eta_theta_sup(t, c, alpha);
        CHECK(z >= prev_zeta * (1.0 - 1e-12));
        CHECK(eta.value >= prev_eta * (1.0 - 1e-9) - 1e-14);
        CHECK(eta.value >= std::abs(a) * (1.0 - 1e-12));
        CHECK(eta.argmax >= 0.0);
        CHECK(eta.argmax <= 1.0);
        CHECK(close(std::abs(a_theta(t, c, alpha * eta.argmax)), eta.value, 1e-9, 1e-14));
        const double searched = eta_theta_search(t, c, alpha).value;
        CHECK(eta.value >= searched * (1.0 - 1e-9) - 1e-14);
        CHECK(close(eta.value, searched, 1e-6, 1e-12));
        prev_zeta = z;
        prev_eta = eta.value;
      }
    }
  }
}

TEST_CASE("modular is zero only at zero and grows along rays") {
  std::mt19937_64 gen(21);
  const auto d = line(3);
  for (int rep = 0; rep < 30; ++rep) {
    const CharacteristicTriplet t = random_triplet(gen, d);
    const GridFunction f(d, random_values(gen, 3));
    CHECK(modular_value(t, GridFunction::zero(d)) == 0.0);
    double prev = 0.0;
    for (double s : {0.1, 0.5, 1.0, 2.0, 8.0}) {
      const double v = modular_value(t, f.scaled(s));
      CHECK(v >= prev * (1.0 - 1e-9));
      prev = v;
    }
    CHECK(modular_value(t, f) == modular_value(t, f.scaled(-1.0)));
  }
}

TEST_CASE("doubling bound iota(2f) <= 5 iota(f)") {
  std::mt19937_64 gen(23);
  const auto d = line(3);
  for (int rep = 0; rep < 200; ++rep) {
    const CharacteristicTriplet t = random_triplet(gen, d);
    const GridFunction f(d, random_values(gen, 3));
    CHECK(modular_value(t, f.scaled(2.0)) <= 5.0 * modular_value(t, f) + 1e-12);
    CHECK(delta2_margin(t, f) >= -1e-12);
  }
}

TEST_CASE("F-norm of the stable fixture solves c^{1+p} = 2m/(2-p)") {
  const auto d = line(1);
  for (double p : {0.5, 1.5, 0.2, 1.9}) {
    for (double m : {0.25, 1.0, 4.0}) {
      const CharacteristicTriplet t = families::stable(d, p, 0.5, 0.5, m);
      const GridFunction f = GridFunction::constant(d, 1.0);
      const FNormResult r = f_norm(t, f);
      CHECK_FALSE(r.infinite);
      const double expect = std::pow(2.0 * m / (2.0 - p), 1.0 / (1.0 + p));
      CHECK(close(r.value, expect, 1e-9));
      CHECK(modular_value(t, f.scaled(1.0 / r.value)) <= r.value * (1.0 + 1e-12));
    }
  }
  const CharacteristicTriplet unit = families::stable(d, 0.5, 0.5, 0.5, 1.0);
  CHECK(close(f_norm(unit, GridFunction::constant(d, 1.0)).value, std::pow(4.0 / 3.0, 2.0 / 3.0), 1e-9));
}

TEST_CASE("F-norm properties") {
  std::mt19937_64 gen(29);
  const auto d = line(3);
  for (int rep = 0; rep < 30; ++rep) {
    const CharacteristicTriplet t = random_triplet(gen, d);
    const GridFunction f(d, random_values(gen, 3));
    const double nf = f_norm(t, f).value;
    CHECK(nf > 0.0);
    CHECK(f_norm(t, f.scaled(-1.0)).value == nf);
    CHECK(f_norm(t, f.scaled(0.5)).value <= nf * (1.0 + 1e-9));
    CHECK(modular_value(t, f.scaled(1.0 / nf)) <= nf * (1.0 + 1e-9));
    CHECK(modular_value(t, f.scaled(1.0 / (nf * (1.0 - 1e-6)))) > nf * (1.0 - 1e-6));
  }
  CHECK(f_norm(families::poisson(d, 1.0), GridFunction::zero(d)).value == 0.0);
}

TEST_CASE("divergent modular is flagged instead of thrown") {
  const auto d = line(1);
  const CharacteristicTriplet t = families::stable(d, 1.9, 0.5, 0.5, 1.0);
  const ModularReport r = modular(t, GridFunction::constant(d, 1e200));
  CHECK(r.infinite);
  CHECK(std::isinf(r.total));
}

TEST_CASE("closed forms reject the wrong family") {
  const auto d = line(2);
  const CharacteristicTriplet t = families::poisson(d, 1.0);
  CHECK_THROWS_AS(closed_form_modular(ExampleFamily::stable, t, GridFunction::constant(d, 1.0)), std::invalid_argument);
}

TEST_CASE("integrability functionals bound the modular") {
  const auto d = line(4);
  std::mt19937_64 gen(31);
  const CharacteristicTriplet pois = families::poisson(d, 2.0);
  const CharacteristicTriplet comp = families::compensated_poisson(d, 2.0);
  for (int rep = 0; rep < 30; ++rep) {
    const GridFunction f(d, random_values(gen, 4));
    const double ip = integrability_functional(ExampleFamily::poisson, pois, f);
    CHECK(modular_value(pois, f) <= 2.0 * ip * (1.0 + 1e-12));
    CHECK(modular_value(pois, f) >= ip * (1.0 - 1e-12));
    const double ic = integrability_functional(ExampleFamily::compensated_poisson, comp, f);
    CHECK(modular_value(comp, f) <= 2.0 * ic * (1.0 + 1e-12) + 1e-300);
    CHECK(modular_value(comp, f) >= 0.5 * ic * (1.0 - 1e-12));
  }
}
