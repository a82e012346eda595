#include "levybasis/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levybasis/truncation.hpp"

namespace levybasis {

namespace {

using boost::math::quadrature::gauss_kronrod;
using Complex = std::complex<double>;

constexpr double kPi = std::numbers::pi;

double eval_transform(const Transform& t, double beta) {
  return std::visit(
      [beta](const auto& tr) -> double {
        using T = std::decay_t<decltype(tr)>;
        if constexpr (std::is_same_v<T, QuadTrunc>) {
          const double ab = tr.alpha * beta;
          return std::min(ab * ab, 1.0);
        } else if constexpr (std::is_same_v<T, DriftDiff>) {
          return tau(tr.alpha * beta) - tr.alpha * tau(beta);
        } else {
          return tr.g(beta);
        }
      },
      t);
}

/// Magnitudes where the transform has a kink.
std::vector<double> transform_breakpoints(const Transform& t) {
  std::vector<double> out{1.0};
  if (const auto* q = std::get_if<QuadTrunc>(&t); q && q->alpha != 0.0) out.push_back(1.0 / std::abs(q->alpha));
  if (const auto* d = std::get_if<DriftDiff>(&t); d && d->alpha != 0.0) out.push_back(1.0 / std::abs(d->alpha));
  std::sort(out.begin(), out.end());
  return out;
}

/// Integral of h(b) * coef * b^k over [lo, hi] in the variable v = log b, split at the given magnitudes.
template <class H>
double log_quadrature(H&& h, double coef, double k, double lo, double hi, const std::vector<double>& breaks,
                      const QuadratureOptions& options) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo};
  for (double b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double vlo = cuts[i] > 0.0 ? std::log(cuts[i]) : -kInfinity;
    const double vhi = std::isinf(cuts[i + 1]) ? kInfinity : std::log(cuts[i + 1]);
    auto integrand = [&](double v) -> double {
      const double b = std::exp(v);
      const double hv = h(b);
      if (hv == 0.0) return 0.0;
      return hv * coef * std::exp((k + 1.0) * v);
    };
    double err = 0.0;
    double part = 0.0;
    try {
      part = gauss_kronrod<double, 15>::integrate(integrand, vlo, vhi, options.max_depth, options.relative_tolerance,
                                                  &err);
    } catch (const std::exception&) {
      return kInfinity;
    }
    if (is_divergent(part)) return kInfinity;
    total += part;
  }
  return total;
}

/// Piecewise polynomial c0 + c1 b + c2 b^2 of the transform on the positive magnitude axis, for side `sign`.
struct Segment {
  double lo;
  double hi;
  double c[3];
};

std::vector<Segment> transform_segments(const Transform& t, double sign) {
  std::vector<Segment> out;
  if (const auto* q = std::get_if<QuadTrunc>(&t)) {
    if (q->alpha == 0.0) return out;
    const double b = 1.0 / std::abs(q->alpha);
    out.push_back({0.0, b, {0.0, 0.0, q->alpha * q->alpha}});
    out.push_back({b, kInfinity, {1.0, 0.0, 0.0}});
    return out;
  }
  const auto* d = std::get_if<DriftDiff>(&t);
  if (d == nullptr) throw std::logic_error("transform_segments: raw transforms have no segments");
  const double alpha = d->alpha;
  if (alpha == 0.0) return out;
  std::vector<double> cuts{0.0, 1.0, 1.0 / std::abs(alpha), kInfinity};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double mid = std::isinf(hi) ? 2.0 * lo + 1.0 : 0.5 * (lo + hi);
    const bool linear_tau = std::abs(alpha * mid) <= 1.0;
    const bool below_one = mid < 1.0;
    // tau(alpha s b) - alpha tau(s b) = s (tau(alpha b) - alpha tau(b))
    double c0 = (linear_tau ? 0.0 : sign_of(alpha)) - (below_one ? 0.0 : alpha);
    double c1 = (linear_tau ? alpha : 0.0) - (below_one ? alpha : 0.0);
    out.push_back({lo, hi, {sign * c0, sign * c1, 0.0}});
  }
  return out;
}

/// Exact integral of the piecewise-polynomial transform against one power piece on [lo, hi].
double analytic_piece(const PowerPiece& piece, const Transform& t, double lo, double hi) {
  double total = 0.0;
  for (const Segment& s : transform_segments(t, piece.sign)) {
    const double a = std::max(lo, s.lo);
    const double b = std::min(hi, s.hi);
    if (!(b > a)) continue;
    for (int j = 0; j < 3; ++j) {
      if (s.c[j] == 0.0) continue;
      total += s.c[j] * power_integral(piece.coef, piece.exponent + j, a, b);
    }
  }
  return total;
}

double numeric_piece(const PowerPiece& piece, const Transform& t, double lo, double hi,
                     const QuadratureOptions& options) {
  const double sign = piece.sign;
  return log_quadrature([&](double b) { return eval_transform(t, sign * b); }, piece.coef, piece.exponent, lo, hi,
                        transform_breakpoints(t), options);
}

/// sin(x) - x without cancellation for small x.
double sin_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 - x2 / 5040.0));
  }
  return std::sin(x) - x;
}

/// e^{i u beta} - 1 - i u tau(beta)
Complex cf_integrand(double u, double beta) {
  const double half = std::sin(0.5 * u * beta);
  const double re = -2.0 * half * half;
  const double im = std::abs(beta) <= 1.0 ? sin_minus_x(u * beta) : std::sin(u * beta) - u * tau(beta);
  return {re, im};
}

/// Integral of e^{i w b} coef b^k over [start, inf), k < -1, by rotating the contour into the upper half plane.
Complex oscillatory_tail(double w, double coef, double k, double start, const QuadratureOptions& options) {
  if (w == 0.0) return {power_integral(coef, k, start, kInfinity), 0.0};
  const double aw = std::abs(w);
  auto along = [&](double t) { return std::exp(-aw * t) * coef * std::pow(Complex(start, t), k); };
  double err = 0.0;
  const double re = gauss_kronrod<double, 15>::integrate([&](double t) { return along(t).real(); }, 0.0, kInfinity,
                                                         options.max_depth, options.relative_tolerance, &err);
  const double im = gauss_kronrod<double, 15>::integrate([&](double t) { return along(t).imag(); }, 0.0, kInfinity,
                                                         options.max_depth, options.relative_tolerance, &err);
  Complex result = Complex(0.0, 1.0) * std::exp(Complex(0.0, aw * start)) * Complex(re, im);
  return w > 0.0 ? result : std::conj(result);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate_side(const TabulatedSide& side, const std::string& name) {
  require(side.magnitude.size() == side.density.size(), name + ": magnitude and density must have equal length");
  for (std::size_t i = 0; i < side.magnitude.size(); ++i) {
    const std::string at = name + "[" + std::to_string(i) + "]";
    require(std::isfinite(side.magnitude[i]) && side.magnitude[i] > 0.0, at + ": magnitude must be finite and > 0");
    require(std::isfinite(side.density[i]) && side.density[i] > 0.0, at + ": density must be finite and > 0");
    if (i > 0) require(side.magnitude[i] > side.magnitude[i - 1], at + ": magnitudes must increase");
  }
}

void append_side_pieces(const TabulatedSide& side, double sign, double small_exponent, double large_exponent,
                        std::vector<PowerPiece>& out) {
  const auto& m = side.magnitude;
  const auto& d = side.density;
  if (m.empty()) return;
  const double k0 = -1.0 - small_exponent;
  out.push_back({0.0, m.front(), d.front() * std::pow(m.front(), -k0), k0, sign});
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const double k = std::log(d[i + 1] / d[i]) / std::log(m[i + 1] / m[i]);
    out.push_back({m[i], m[i + 1], d[i] * std::pow(m[i], -k), k, sign});
  }
  const double kinf = -1.0 - large_exponent;
  out.push_back({m.back(), kInfinity, d.back() * std::pow(m.back(), -kinf), kinf, sign});
}

}  // namespace

double power_integral(double coef, double exponent, double lo, double hi) {
  if (!(hi > lo) || coef == 0.0) return 0.0;
  const double e = exponent + 1.0;
  if (std::isinf(hi)) {
    if (e >= 0.0) return kInfinity;
    if (lo == 0.0) return kInfinity;
    return coef * std::pow(lo, e) / -e;
  }
  if (lo == 0.0) {
    if (e <= 0.0) return kInfinity;
    return coef * std::pow(hi, e) / e;
  }
  const double log_ratio = std::log(hi / lo);
  if (std::abs(e) < 1e-300) return coef * log_ratio;
  return coef * std::pow(lo, e) * std::expm1(e * log_ratio) / e;
}

double JumpTable::draw(double u_select, double u_position) const {
  if (pieces_.empty()) throw std::logic_error("JumpTable::draw: empty table");
  const double target = u_select * total_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), pieces_.size() - 1);
  const PowerPiece& p = pieces_[idx];
  const double e = p.exponent + 1.0;
  double b = 0.0;
  if (std::isinf(p.hi)) {
    b = p.lo * std::pow(1.0 - u_position, 1.0 / e);
  } else {
    const double log_ratio = std::log(p.hi / p.lo);
    if (std::abs(e) < 1e-300) {
      b = p.lo * std::exp(u_position * log_ratio);
    } else {
      b = p.lo * std::pow(1.0 + u_position * std::expm1(e * log_ratio), 1.0 / e);
    }
    b = std::clamp(b, p.lo, p.hi);
  }
  return p.sign * b;
}

LevyKernel LevyKernel::zero() {
  LevyKernel k;
  k.data_ = std::vector<Atom>{};
  return k;
}

LevyKernel LevyKernel::atoms(std::vector<Atom> atoms) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string at = "atoms[" + std::to_string(i) + "]";
    require(std::isfinite(atoms[i].location) && atoms[i].location != 0.0, at + ".location: must be finite and != 0");
    require(std::isfinite(atoms[i].weight) && atoms[i].weight >= 0.0, at + ".weight: must be finite and >= 0");
  }
  LevyKernel k;
  k.data_ = std::move(atoms);
  return k;
}

LevyKernel LevyKernel::stable(double p, double x, double y) {
  require(p > 0.0 && p < 2.0 && p != 1.0, "stable.p: must lie in (0,2) without 1");
  require(x >= 0.0 && y >= 0.0, "stable.x/y: must be >= 0");
  require(std::abs(x + y - 1.0) <= 1e-12, "stable.x/y: must satisfy x + y = 1");
  LevyKernel k;
  k.data_ = StableParams{p, x, y};
  if (x > 0.0) k.pieces_.push_back({0.0, kInfinity, x * p, -p - 1.0, 1.0});
  if (y > 0.0) k.pieces_.push_back({0.0, kInfinity, y * p, -p - 1.0, -1.0});
  k.small_exponent_ = p;
  k.large_exponent_ = p;
  return k;
}

LevyKernel LevyKernel::tabulated(TabulatedSide positive, TabulatedSide negative, double small_exponent,
                                 double large_exponent) {
  validate_side(positive, "tabulated.positive");
  validate_side(negative, "tabulated.negative");
  require(std::isfinite(small_exponent) && small_exponent < 2.0, "tabulated.small_exponent: must be < 2");
  require(std::isfinite(large_exponent) && large_exponent > 0.0, "tabulated.large_exponent: must be > 0");
  LevyKernel k;
  append_side_pieces(positive, 1.0, small_exponent, large_exponent, k.pieces_);
  append_side_pieces(negative, -1.0, small_exponent, large_exponent, k.pieces_);
  k.data_ = std::make_pair(std::move(positive), std::move(negative));
  k.small_exponent_ = small_exponent;
  k.large_exponent_ = large_exponent;
  require(!is_divergent(kernel_integral(k, QuadTrunc{1.0})), "tabulated: integral of (b^2 ^ 1) diverges");
  return k;
}

LevyKernel::Family LevyKernel::family() const {
  switch (data_.index()) {
    case 0:
      return Family::atoms;
    case 1:
      return Family::stable;
    default:
      return Family::tabulated;
  }
}

bool LevyKernel::is_zero() const {
  if (const auto* a = std::get_if<std::vector<Atom>>(&data_)) {
    return std::all_of(a->begin(), a->end(), [](const Atom& at) { return at.weight == 0.0; });
  }
  return false;
}

const std::vector<Atom>& LevyKernel::atom_list() const {
  if (const auto* a = std::get_if<std::vector<Atom>>(&data_)) return *a;
  throw std::logic_error("LevyKernel: not an atoms kernel");
}

const StableParams& LevyKernel::stable_params() const {
  if (const auto* s = std::get_if<StableParams>(&data_)) return *s;
  throw std::logic_error("LevyKernel: not a stable kernel");
}

bool LevyKernel::operator==(const LevyKernel& other) const {
  return data_ == other.data_ && small_exponent_ == other.small_exponent_ &&
         large_exponent_ == other.large_exponent_;
}

double LevyKernel::mass_above(double eps) const {
  if (family() == Family::atoms) {
    double m = 0.0;
    for (const Atom& a : atom_list())
      if (std::abs(a.location) >= eps) m += a.weight;
    return m;
  }
  double m = 0.0;
  for (const PowerPiece& p : pieces_) m += power_integral(p.coef, p.exponent, std::max(p.lo, eps), p.hi);
  return m;
}

double LevyKernel::tau_mean_above(double eps) const {
  if (family() == Family::atoms) {
    double m = 0.0;
    for (const Atom& a : atom_list())
      if (std::abs(a.location) >= eps) m += a.weight * tau(a.location);
    return m;
  }
  double m = 0.0;
  for (const PowerPiece& p : pieces_) {
    const double lo = std::max(p.lo, eps);
    const double linear = power_integral(p.coef, p.exponent + 1.0, lo, std::min(p.hi, 1.0));
    const double flat = power_integral(p.coef, p.exponent, std::max(lo, 1.0), p.hi);
    m += p.sign * (linear + flat);
  }
  return m;
}

double LevyKernel::abs_moment_below(double eps, int k) const {
  double m = 0.0;
  if (family() == Family::atoms) {
    for (const Atom& a : atom_list())
      if (std::abs(a.location) < eps) m += a.weight * std::pow(std::abs(a.location), k);
    return m;
  }
  for (const PowerPiece& p : pieces_) m += power_integral(p.coef, p.exponent + k, p.lo, std::min(p.hi, eps));
  return m;
}

double LevyKernel::signed_moment_below(double eps, int k) const {
  double m = 0.0;
  if (family() == Family::atoms) {
    for (const Atom& a : atom_list())
      if (std::abs(a.location) < eps) m += a.weight * std::pow(a.location, k);
    return m;
  }
  for (const PowerPiece& p : pieces_) {
    const double s = (k % 2 == 0) ? 1.0 : p.sign;
    m += s * power_integral(p.coef, p.exponent + k, p.lo, std::min(p.hi, eps));
  }
  return m;
}

JumpTable LevyKernel::jump_table(double eps) const {
  JumpTable table;
  if (!(eps > 0.0)) throw std::invalid_argument("jump_table: eps must be > 0");
  for (const PowerPiece& p : pieces_) {
    const double lo = std::max(p.lo, eps);
    if (!(p.hi > lo)) continue;
    const double m = power_integral(p.coef, p.exponent, lo, p.hi);
    if (!(m > 0.0)) continue;
    PowerPiece restricted = p;
    restricted.lo = lo;
    table.pieces_.push_back(restricted);
    table.total_ += m;
    table.cumulative_.push_back(table.total_);
  }
  return table;
}

std::complex<double> LevyKernel::cf_exponent(double u, const QuadratureOptions& options) const {
  if (u == 0.0) return {0.0, 0.0};
  switch (family()) {
    case Family::atoms: {
      Complex s{0.0, 0.0};
      for (const Atom& a : atom_list()) s += a.weight * cf_integrand(u, a.location);
      return s;
    }
    case Family::stable: {
      // Strictly stable exponent minus the drift that the kernel's own compensation carries.
      const auto& [p, x, y] = stable_params();
      const double scale = p * std::tgamma(-p) * std::pow(std::abs(u), p);
      const Complex strict(scale * std::cos(kPi * p / 2.0),
                           -scale * (x - y) * sign_of(u) * std::sin(kPi * p / 2.0));
      return strict - Complex(0.0, u * (x - y) / (1.0 - p));
    }
    case Family::tabulated:
      break;
  }
  Complex total{0.0, 0.0};
  for (const PowerPiece& p : pieces_) {
    const double split = std::isinf(p.hi) ? std::max(p.lo, 1.0) : p.hi;
    const std::vector<double> breaks{1.0};
    const double re = log_quadrature([&](double b) { return cf_integrand(u, p.sign * b).real(); }, p.coef,
                                     p.exponent, p.lo, split, breaks, options);
    const double im = log_quadrature([&](double b) { return cf_integrand(u, p.sign * b).imag(); }, p.coef,
                                     p.exponent, p.lo, split, breaks, options);
    total += Complex(re, im);
    if (std::isinf(p.hi)) {
      const double mass = power_integral(p.coef, p.exponent, split, kInfinity);
      total += oscillatory_tail(u * p.sign, p.coef, p.exponent, split, options) -
               Complex(1.0, u * p.sign) * mass;
    }
  }
  return total;
}

double kernel_integral(const LevyKernel& kernel, const Transform& transform, const QuadratureOptions& options) {
  const bool raw = std::holds_alternative<RawTransform>(transform);
  double result = 0.0;
  switch (kernel.family()) {
    case LevyKernel::Family::atoms:
      for (const Atom& a : kernel.atom_list()) result += a.weight * eval_transform(transform, a.location);
      break;
    case LevyKernel::Family::stable: {
      if (raw) {
        result = quadrature_over_pieces(kernel.pieces(), transform, options);
        break;
      }
      const auto& [p, x, y] = kernel.stable_params();
      if (const auto* q = std::get_if<QuadTrunc>(&transform)) {
        result = 2.0 / (2.0 - p) * std::pow(std::abs(q->alpha), p);
      } else {
        const double alpha = std::get<DriftDiff>(transform).alpha;
        result = (x - y) * (sign_of(alpha) * std::pow(std::abs(alpha), p) - alpha) / (1.0 - p);
      }
      break;
    }
    case LevyKernel::Family::tabulated: {
      if (raw) {
        result = quadrature_over_pieces(kernel.pieces(), transform, options);
        break;
      }
      // Interior pieces by adaptive quadrature; the two unbounded tail pieces of each side analytically.
      for (const PowerPiece& p : kernel.pieces()) {
        const bool tail = p.lo == 0.0 || std::isinf(p.hi);
        result += tail ? analytic_piece(p, transform, p.lo, p.hi) : numeric_piece(p, transform, p.lo, p.hi, options);
      }
      break;
    }
  }
  return is_divergent(result) ? kInfinity : result;
}

double quadrature_over_pieces(const std::vector<PowerPiece>& pieces, const Transform& transform,
                              const QuadratureOptions& options) {
  double total = 0.0;
  for (const PowerPiece& p : pieces) {
    const double part = numeric_piece(p, transform, p.lo, p.hi, options);
    if (is_divergent(part)) return kInfinity;
    total += part;
  }
  return total;
}

}  // namespace levybasis
