#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "levybasis/domain.hpp"
#include "levybasis/kernel.hpp"

namespace levybasis {

/// Densities of one cell relative to the control measure.
struct CellLaw {
  double a = 0.0;
  double q = 0.0;
  std::shared_ptr<const LevyKernel> kernel;
};

/// Characteristic triplet [a0, q0, lambda0] disintegrated against chi, constant per cell.
/// Immutable after construction.
class CharacteristicTriplet {
 public:
  CharacteristicTriplet(DomainPtr domain, ControlMeasure control, std::vector<CellLaw> cells,
                        QuadratureOptions quadrature = {});

  /// Same (a, q, kernel) on every cell.
  static CharacteristicTriplet homogeneous(DomainPtr domain, ControlMeasure control, double a, double q,
                                           LevyKernel kernel, QuadratureOptions quadrature = {});

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const ControlMeasure& control() const { return control_; }
  const QuadratureOptions& quadrature() const { return quadrature_; }
  std::size_t cell_count() const { return cells_.size(); }

  const CellLaw& cell(std::size_t c) const { return cells_.at(c); }
  double drift_density(std::size_t c) const { return cells_.at(c).a; }
  double gaussian_density(std::size_t c) const { return cells_.at(c).q; }
  const LevyKernel& kernel(std::size_t c) const { return *cells_.at(c).kernel; }
  /// Integral of (b^2 ^ 1) against the kernel of cell c.
  double kernel_second_moment(std::size_t c) const { return kernel_mass_.at(c); }

  double a0(std::span<const std::size_t> cells) const;
  double q0(std::span<const std::size_t> cells) const;

  /// |a| + q + int (b^2 ^ 1) kappa, the density of the reconstructed control measure.
  double reconstructed_density(std::size_t c) const;

  /// Same densities with chi scaled by `factor` (convolution roots use 2^{-m}).
  CharacteristicTriplet with_control_scaled(double factor) const;

 private:
  DomainPtr domain_;
  ControlMeasure control_;
  std::vector<CellLaw> cells_;
  std::vector<double> kernel_mass_;
  QuadratureOptions quadrature_;
};

/// Log of the characteristic function of Theta(A); nullopt if an integral diverges.
std::optional<std::complex<double>> levy_khintchine_exponent(const CharacteristicTriplet& triplet, const CellSet& cells,
                                                             double u);

/// Characteristic function of Theta(A); nullopt signals a divergent triplet integral.
std::optional<std::complex<double>> levy_khintchine_cf(const CharacteristicTriplet& triplet, const CellSet& cells,
                                                       double u);

}  // namespace levybasis
