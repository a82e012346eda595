#pragma once

#include <string>
#include <vector>

#include "levybasis/families.hpp"
#include "levybasis/triplet.hpp"

namespace levybasis {

/// Deterministic integrand with one finite value per domain cell.
class GridFunction {
 public:
  GridFunction(DomainPtr domain, std::vector<double> values);

  static GridFunction zero(DomainPtr domain);
  static GridFunction constant(DomainPtr domain, double value);
  static GridFunction indicator(DomainPtr domain, const CellSet& cells, double value = 1.0);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t c) const { return values_[c]; }
  std::size_t size() const { return values_.size(); }

  GridFunction scaled(double factor) const;
  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator-(const GridFunction& other) const;

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

/// Both share a domain (same object or structurally equal).
bool same_domain(const Domain& a, const Domain& b);

/// alpha a(r) + int (tau(alpha b) - alpha tau(b)) kappa(r, db); +infinity on divergence.
double a_theta(const CharacteristicTriplet& triplet, std::size_t cell, double alpha);

/// int (|alpha b|^2 ^ 1) kappa(r, db) + alpha^2 q(r).
double zeta_theta(const CharacteristicTriplet& triplet, std::size_t cell, double alpha);

struct EtaOptions {
  std::size_t grid_points = 129;
  double refine_tolerance = 1e-13;
};

/// Value of the drift supremum and the smallest beta in [0, 1] attaining it.
struct DriftSup {
  double value = 0.0;
  double argmax = 0.0;
};

/// sup over beta in [0,1] of |a_theta(alpha beta)|. Closed forms for atom and stable kernels,
/// grid search with golden-section refinement otherwise.
DriftSup eta_theta_sup(const CharacteristicTriplet& triplet, std::size_t cell, double alpha,
                       const EtaOptions& options = {});
/// Grid plus golden-section search regardless of kernel family.
DriftSup eta_theta_search(const CharacteristicTriplet& triplet, std::size_t cell, double alpha,
                          const EtaOptions& options = {});
double eta_theta(const CharacteristicTriplet& triplet, std::size_t cell, double alpha);

struct CellModular {
  std::size_t cell = 0;
  double mass = 0.0;
  double zeta = 0.0;
  double eta = 0.0;
};

struct ModularReport {
  double zeta_part = 0.0;
  double eta_part = 0.0;
  double total = 0.0;
  bool infinite = false;
  std::vector<CellModular> per_cell;
};

/// iota(f) = sum over cells of (zeta + eta)(|f|) chi(cell).
ModularReport modular(const CharacteristicTriplet& triplet, const GridFunction& f);
/// Total of modular(); +infinity when the modular diverges.
double modular_value(const CharacteristicTriplet& triplet, const GridFunction& f);

struct FNormOptions {
  double relative_tolerance = 1e-10;
  double bracket_low = 1e-12;
  double bracket_high = 1e12;
  double bracket_cap = 1e300;
};

struct FNormResult {
  double value = 0.0;
  bool infinite = false;
  int evaluations = 0;
  std::string diagnostic;
};

/// inf{c > 0 : iota(f / c) <= c} by geometric bisection on the sign change of iota(f/c) - c.
FNormResult f_norm(const CharacteristicTriplet& triplet, const GridFunction& f, const FNormOptions& options = {});

/// Closed-form modular of the worked families; throws std::invalid_argument if the triplet
/// does not carry the family's densities.
double closed_form_modular(ExampleFamily family, const CharacteristicTriplet& triplet, const GridFunction& f);

/// Poisson: int (|f| ^ 1) da0; compensated Poisson: int (f^2 ^ |f|) da0; stable: int |f|^p drho.
/// Finite exactly when f is integrable.
double integrability_functional(ExampleFamily family, const CharacteristicTriplet& triplet, const GridFunction& f);

/// 5 iota(f) - iota(2f); nonnegative up to rounding.
double delta2_margin(const CharacteristicTriplet& triplet, const GridFunction& f);

}  // namespace levybasis
