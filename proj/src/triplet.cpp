#include "levybasis/triplet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "levybasis/truncation.hpp"

namespace levybasis {

CharacteristicTriplet::CharacteristicTriplet(DomainPtr domain, ControlMeasure control, std::vector<CellLaw> cells,
                                             QuadratureOptions quadrature)
    : domain_(std::move(domain)), control_(std::move(control)), cells_(std::move(cells)), quadrature_(quadrature) {
  if (!domain_) throw std::invalid_argument("triplet: missing domain");
  if (cells_.size() != domain_->cell_count() || control_.cell_count() != domain_->cell_count())
    throw std::invalid_argument("triplet: one cell law and one control mass per domain cell required");
  kernel_mass_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const std::string at = "triplet.cells[" + std::to_string(c) + "]";
    const CellLaw& law = cells_[c];
    if (!std::isfinite(law.a)) throw std::invalid_argument(at + ".a: must be finite");
    if (!(law.q >= 0.0) || !std::isfinite(law.q)) throw std::invalid_argument(at + ".q: must be finite and >= 0");
    if (!law.kernel) throw std::invalid_argument(at + ".kernel: missing");
    kernel_mass_[c] = kernel_integral(*law.kernel, QuadTrunc{1.0}, quadrature_);
    if (is_divergent(kernel_mass_[c])) throw std::invalid_argument(at + ".kernel: integral of (b^2 ^ 1) diverges");
  }
}

CharacteristicTriplet CharacteristicTriplet::homogeneous(DomainPtr domain, ControlMeasure control, double a, double q,
                                                         LevyKernel kernel, QuadratureOptions quadrature) {
  auto shared = std::make_shared<const LevyKernel>(std::move(kernel));
  std::vector<CellLaw> cells(domain->cell_count(), CellLaw{a, q, shared});
  return CharacteristicTriplet(std::move(domain), std::move(control), std::move(cells), quadrature);
}

double CharacteristicTriplet::a0(std::span<const std::size_t> cells) const {
  double s = 0.0;
  for (std::size_t c : cells) s += cells_.at(c).a * control_.mass(c);
  return s;
}

double CharacteristicTriplet::q0(std::span<const std::size_t> cells) const {
  double s = 0.0;
  for (std::size_t c : cells) s += cells_.at(c).q * control_.mass(c);
  return s;
}

double CharacteristicTriplet::reconstructed_density(std::size_t c) const {
  return std::abs(cells_.at(c).a) + cells_.at(c).q + kernel_mass_.at(c);
}

CharacteristicTriplet CharacteristicTriplet::with_control_scaled(double factor) const {
  return CharacteristicTriplet(domain_, control_.scaled(factor), cells_, quadrature_);
}

std::optional<std::complex<double>> levy_khintchine_exponent(const CharacteristicTriplet& triplet, const CellSet& cells,
                                                             double u) {
  std::complex<double> exponent{0.0, 0.0};
  for (std::size_t c : cells) {
    const double chi = triplet.control().mass(c);
    if (chi == 0.0) continue;
    const CellLaw& law = triplet.cell(c);
    const std::complex<double> jump = law.kernel->cf_exponent(u, triplet.quadrature());
    if (!std::isfinite(jump.real()) || !std::isfinite(jump.imag())) return std::nullopt;
    exponent += chi * (std::complex<double>(-0.5 * u * u * law.q, u * law.a) + jump);
  }
  return exponent;
}

std::optional<std::complex<double>> levy_khintchine_cf(const CharacteristicTriplet& triplet, const CellSet& cells,
                                                       double u) {
  if (u == 0.0) return std::complex<double>(1.0, 0.0);
  auto exponent = levy_khintchine_exponent(triplet, cells, u);
  if (!exponent) return std::nullopt;
  return std::exp(*exponent);
}

}  // namespace levybasis
