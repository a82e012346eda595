#pragma once

#include <string_view>

#include "levybasis/triplet.hpp"

namespace levybasis {

/// The three worked families with closed-form modulars.
enum class ExampleFamily { poisson, compensated_poisson, stable };

ExampleFamily parse_family(std::string_view name);
std::string_view family_name(ExampleFamily family);

namespace families {

/// a = 0, q = 1, no jumps; chi has the given density.
CharacteristicTriplet gaussian(DomainPtr domain, double chi_density = 1.0, double q = 1.0);

/// Poisson random measure with intensity density `intensity` (a0 = intensity * volume);
/// chi = 2 a0, a = 1/2, kappa = delta_1 / 2.
CharacteristicTriplet poisson(DomainPtr domain, double intensity);

/// Compensated Poisson: chi = a0, a = 0, kappa = delta_1.
CharacteristicTriplet compensated_poisson(DomainPtr domain, double intensity);

/// Stable family with chi = rho: a = (x - y) / (1 - p), q = 0, kappa = mu_p.
CharacteristicTriplet stable(DomainPtr domain, double p, double x, double y, double rho_density = 1.0);

/// True iff every cell carries the densities of the named family.
bool matches(const CharacteristicTriplet& triplet, ExampleFamily family);

}  // namespace families
}  // namespace levybasis
