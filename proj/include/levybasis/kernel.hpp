#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

namespace levybasis {

struct QuadratureOptions {
  double relative_tolerance = 1e-10;
  unsigned max_depth = 20;
};

/// Point mass `weight` at jump size `location` (location != 0).
struct Atom {
  double location;
  double weight;
  bool operator==(const Atom&) const = default;
};

/// Stable Levy density x p b^{-p-1} on b > 0 and y p |b|^{-p-1} on b < 0.
struct StableParams {
  double p;
  double x;
  double y;
  bool operator==(const StableParams&) const = default;
};

/// One side of a tabulated density, sampled at increasing magnitudes |beta| > 0.
/// Between nodes the density is interpolated linearly in log-log coordinates.
struct TabulatedSide {
  std::vector<double> magnitude;
  std::vector<double> density;
  bool operator==(const TabulatedSide&) const = default;
};

/// Density coef * |beta|^exponent on sign * [lo, hi).
struct PowerPiece {
  double lo;
  double hi;
  double coef;
  double exponent;
  double sign;
};

/// beta -> (|alpha beta|^2 ^ 1)
struct QuadTrunc {
  double alpha;
};
/// beta -> tau(alpha beta) - alpha tau(beta)
struct DriftDiff {
  double alpha;
};
/// beta -> g(beta), g bounded.
struct RawTransform {
  std::function<double(double)> g;
};
using Transform = std::variant<QuadTrunc, DriftDiff, RawTransform>;

/// Sampling table for jumps with |beta| >= eps; see LevyKernel::jump_table.
class JumpTable {
 public:
  double total_mass() const { return total_; }
  bool empty() const { return pieces_.empty(); }
  /// Maps two independent U(0,1) variates to one jump size.
  double draw(double u_select, double u_position) const;

 private:
  friend class LevyKernel;
  std::vector<PowerPiece> pieces_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

/// Levy kernel kappa(r, .) for one cell, per unit of control mass.
class LevyKernel {
 public:
  enum class Family { atoms, stable, tabulated };

  static LevyKernel zero();
  static LevyKernel atoms(std::vector<Atom> atoms);
  static LevyKernel stable(double p, double x, double y);
  static LevyKernel tabulated(TabulatedSide positive, TabulatedSide negative, double small_exponent,
                              double large_exponent);

  Family family() const;
  bool is_zero() const;
  const std::vector<Atom>& atom_list() const;
  const StableParams& stable_params() const;
  /// Power-law pieces for stable and tabulated kernels (empty for atoms).
  const std::vector<PowerPiece>& pieces() const { return pieces_; }
  double small_exponent() const { return small_exponent_; }
  double large_exponent() const { return large_exponent_; }

  /// Mass of {|beta| >= eps}; eps > 0 for non-atomic kernels.
  double mass_above(double eps) const;
  /// Integral of tau(beta) over {|beta| >= eps}.
  double tau_mean_above(double eps) const;
  /// Integral of |beta|^k over {|beta| < eps}.
  double abs_moment_below(double eps, int k) const;
  /// Integral of beta^k over {|beta| < eps}.
  double signed_moment_below(double eps, int k) const;
  JumpTable jump_table(double eps) const;

  /// Integral of (e^{i u beta} - 1 - i u tau(beta)) kappa(d beta).
  std::complex<double> cf_exponent(double u, const QuadratureOptions& options = {}) const;

  bool operator==(const LevyKernel& other) const;

 private:
  LevyKernel() = default;
  std::variant<std::vector<Atom>, StableParams, std::pair<TabulatedSide, TabulatedSide>> data_;
  std::vector<PowerPiece> pieces_;
  double small_exponent_ = 0.0;
  double large_exponent_ = 0.0;
};

/// Integral of the transform against kappa. Divergence is reported as +infinity.
double kernel_integral(const LevyKernel& kernel, const Transform& transform, const QuadratureOptions& options = {});

/// Integral of coef * b^k over [lo, hi] (hi may be +infinity); +infinity if divergent.
double power_integral(double coef, double exponent, double lo, double hi);

/// Integral of the transform against the power-law pieces by adaptive quadrature only,
/// with no closed forms or analytic tails. Used to cross-check closed forms.
double quadrature_over_pieces(const std::vector<PowerPiece>& pieces, const Transform& transform,
                              const QuadratureOptions& options = {});

}  // namespace levybasis
