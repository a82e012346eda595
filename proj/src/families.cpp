#include "levybasis/families.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace levybasis {

ExampleFamily parse_family(std::string_view name) {
  if (name == "poisson") return ExampleFamily::poisson;
  if (name == "comp_poisson" || name == "compensated_poisson") return ExampleFamily::compensated_poisson;
  if (name == "stable") return ExampleFamily::stable;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::string_view family_name(ExampleFamily family) {
  switch (family) {
    case ExampleFamily::poisson:
      return "poisson";
    case ExampleFamily::compensated_poisson:
      return "comp_poisson";
    case ExampleFamily::stable:
      return "stable";
  }
  return "?";
}

namespace families {

CharacteristicTriplet gaussian(DomainPtr domain, double chi_density, double q) {
  auto control = ControlMeasure::uniform(*domain, chi_density);
  return CharacteristicTriplet::homogeneous(std::move(domain), std::move(control), 0.0, q, LevyKernel::zero());
}

CharacteristicTriplet poisson(DomainPtr domain, double intensity) {
  auto control = ControlMeasure::uniform(*domain, 2.0 * intensity);
  return CharacteristicTriplet::homogeneous(std::move(domain), std::move(control), 0.5, 0.0,
                                            LevyKernel::atoms({{1.0, 0.5}}));
}

CharacteristicTriplet compensated_poisson(DomainPtr domain, double intensity) {
  auto control = ControlMeasure::uniform(*domain, intensity);
  return CharacteristicTriplet::homogeneous(std::move(domain), std::move(control), 0.0, 0.0,
                                            LevyKernel::atoms({{1.0, 1.0}}));
}

CharacteristicTriplet stable(DomainPtr domain, double p, double x, double y, double rho_density) {
  auto kernel = LevyKernel::stable(p, x, y);
  auto control = ControlMeasure::uniform(*domain, rho_density);
  return CharacteristicTriplet::homogeneous(std::move(domain), std::move(control), (x - y) / (1.0 - p), 0.0,
                                            std::move(kernel));
}

bool matches(const CharacteristicTriplet& triplet, ExampleFamily family) {
  for (std::size_t c = 0; c < triplet.cell_count(); ++c) {
    const CellLaw& law = triplet.cell(c);
    if (law.q != 0.0) return false;
    switch (family) {
      case ExampleFamily::poisson:
        if (law.a != 0.5 || !(*law.kernel == LevyKernel::atoms({{1.0, 0.5}}))) return false;
        break;
      case ExampleFamily::compensated_poisson:
        if (law.a != 0.0 || !(*law.kernel == LevyKernel::atoms({{1.0, 1.0}}))) return false;
        break;
      case ExampleFamily::stable: {
        if (law.kernel->family() != LevyKernel::Family::stable) return false;
        const auto& s = law.kernel->stable_params();
        if (std::abs(law.a - (s.x - s.y) / (1.0 - s.p)) > 1e-12 * (1.0 + std::abs(law.a))) return false;
        break;
      }
    }
  }
  return true;
}

}  // namespace families
}  // namespace levybasis
