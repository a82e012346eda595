#include "levybasis/modular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levybasis/truncation.hpp"

namespace levybasis {

GridFunction::GridFunction(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (!domain_) throw std::invalid_argument("GridFunction: missing domain");
  if (values_.size() != domain_->cell_count())
    throw std::invalid_argument("GridFunction: expected " + std::to_string(domain_->cell_count()) + " values, got " +
                                std::to_string(values_.size()));
  for (std::size_t c = 0; c < values_.size(); ++c) {
    if (!std::isfinite(values_[c]))
      throw std::invalid_argument("GridFunction: value at cell " + std::to_string(c) + " is not finite");
  }
}

GridFunction GridFunction::zero(DomainPtr domain) { return constant(std::move(domain), 0.0); }

GridFunction GridFunction::constant(DomainPtr domain, double value) {
  const std::size_t n = domain->cell_count();
  return GridFunction(std::move(domain), std::vector<double>(n, value));
}

GridFunction GridFunction::indicator(DomainPtr domain, const CellSet& cells, double value) {
  std::vector<double> v(domain->cell_count(), 0.0);
  for (std::size_t c : cells) v.at(c) = value;
  return GridFunction(std::move(domain), std::move(v));
}

GridFunction GridFunction::scaled(double factor) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= factor;
  return GridFunction(domain_, std::move(v));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  if (!same_domain(*domain_, other.domain())) throw std::invalid_argument("GridFunction: domain mismatch");
  std::vector<double> v = values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return GridFunction(domain_, std::move(v));
}

GridFunction GridFunction::operator-(const GridFunction& other) const { return *this + other.scaled(-1.0); }

bool same_domain(const Domain& a, const Domain& b) { return &a == &b || a == b; }

double a_theta(const CharacteristicTriplet& triplet, std::size_t cell, double alpha) {
  if (alpha == 0.0) return 0.0;
  const double jump = kernel_integral(triplet.kernel(cell), DriftDiff{alpha}, triplet.quadrature());
  if (is_divergent(jump)) return kInfinity;
  return alpha * triplet.drift_density(cell) + jump;
}

double zeta_theta(const CharacteristicTriplet& triplet, std::size_t cell, double alpha) {
  if (alpha == 0.0) return 0.0;
  const double jump = kernel_integral(triplet.kernel(cell), QuadTrunc{alpha}, triplet.quadrature());
  if (is_divergent(jump)) return kInfinity;
  return jump + alpha * alpha * triplet.gaussian_density(cell);
}

namespace {

/// Best of the candidate betas; ties resolve to the smallest beta.
DriftSup best_of(const CharacteristicTriplet& triplet, std::size_t cell, double alpha, std::vector<double> betas) {
  std::sort(betas.begin(), betas.end());
  DriftSup best{0.0, 0.0};
  for (double b : betas) {
    const double v = std::abs(a_theta(triplet, cell, alpha * b));
    if (!std::isfinite(v)) return {kInfinity, b};
    if (v > best.value) best = {v, b};
  }
  return best;
}

DriftSup atoms_sup(const CharacteristicTriplet& triplet, std::size_t cell, double alpha) {
  // a_theta(alpha b) is piecewise linear in b with kinks where |alpha b location| = 1.
  std::vector<double> betas{0.0, 1.0};
  for (const Atom& a : triplet.kernel(cell).atom_list()) {
    const double kink = 1.0 / std::abs(alpha * a.location);
    if (kink < 1.0) betas.push_back(kink);
  }
  return best_of(triplet, cell, alpha, std::move(betas));
}

DriftSup stable_sup(const CharacteristicTriplet& triplet, std::size_t cell, double alpha) {
  // a_theta(alpha b) = lin * alpha b + pow_coef * (alpha b)^p for b >= 0.
  const auto& s = triplet.kernel(cell).stable_params();
  const double pow_coef = (s.x - s.y) / (1.0 - s.p);
  const double lin = triplet.drift_density(cell) - pow_coef;
  std::vector<double> betas{0.0, 1.0};
  if (lin != 0.0 && pow_coef != 0.0) {
    const double ratio = -lin * std::pow(alpha, 1.0 - s.p) / (s.p * pow_coef);
    if (ratio > 0.0) {
      const double critical = std::pow(ratio, 1.0 / (s.p - 1.0));
      if (critical > 0.0 && critical < 1.0) betas.push_back(critical);
    }
  }
  if (lin == 0.0) {
    const double v = std::abs(pow_coef) * std::pow(alpha, s.p);
    return {v, v > 0.0 ? 1.0 : 0.0};
  }
  return best_of(triplet, cell, alpha, std::move(betas));
}

}  // namespace

DriftSup eta_theta_search(const CharacteristicTriplet& triplet, std::size_t cell, double alpha,
                          const EtaOptions& options) {
  const std::size_t n = std::max<std::size_t>(options.grid_points, 3);
  auto value = [&](double b) { return std::abs(a_theta(triplet, cell, alpha * b)); };
  std::vector<double> grid(n);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = value(static_cast<double>(i) / static_cast<double>(n - 1));
    if (!std::isfinite(grid[i])) return {kInfinity, static_cast<double>(i) / static_cast<double>(n - 1)};
    if (grid[i] > grid[best]) best = i;
  }
  const double h = 1.0 / static_cast<double>(n - 1);
  DriftSup result{grid[best], static_cast<double>(best) * h};
  if (result.value == 0.0) return result;
  // Golden-section refinement in the bracket around the best grid point.
  double lo = std::max(0.0, result.argmax - h);
  double hi = std::min(1.0, result.argmax + h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = value(x1);
  double f2 = value(x2);
  while (hi - lo > options.refine_tolerance) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double refined = value(mid);
  if (refined > result.value) result = {refined, mid};
  return result;
}

DriftSup eta_theta_sup(const CharacteristicTriplet& triplet, std::size_t cell, double alpha,
                       const EtaOptions& options) {
  if (std::isnan(alpha)) throw std::invalid_argument("eta_theta: alpha is NaN");
  if (alpha < 0.0) {
    const DriftSup mirrored = eta_theta_sup(triplet, cell, -alpha, options);
    return {mirrored.value, -mirrored.argmax};
  }
  if (alpha == 0.0) return {0.0, 0.0};
  switch (triplet.kernel(cell).family()) {
    case LevyKernel::Family::atoms:
      return atoms_sup(triplet, cell, alpha);
    case LevyKernel::Family::stable:
      return stable_sup(triplet, cell, alpha);
    case LevyKernel::Family::tabulated:
      break;
  }
  return eta_theta_search(triplet, cell, alpha, options);
}

double eta_theta(const CharacteristicTriplet& triplet, std::size_t cell, double alpha) {
  return eta_theta_sup(triplet, cell, alpha).value;
}

ModularReport modular(const CharacteristicTriplet& triplet, const GridFunction& f) {
  if (!same_domain(triplet.domain(), f.domain())) throw std::invalid_argument("modular: domain mismatch");
  ModularReport report;
  report.per_cell.reserve(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    CellModular cm;
    cm.cell = c;
    cm.mass = triplet.control().mass(c);
    const double alpha = std::abs(f[c]);
    if (alpha != 0.0 && cm.mass != 0.0) {
      cm.zeta = zeta_theta(triplet, c, alpha);
      cm.eta = eta_theta(triplet, c, alpha);
    }
    if (!std::isfinite(cm.zeta) || !std::isfinite(cm.eta)) {
      report.infinite = true;
    } else {
      report.zeta_part += cm.zeta * cm.mass;
      report.eta_part += cm.eta * cm.mass;
    }
    report.per_cell.push_back(cm);
  }
  report.total = report.infinite ? kInfinity : report.zeta_part + report.eta_part;
  if (is_divergent(report.total)) {
    report.infinite = true;
    report.total = kInfinity;
  }
  return report;
}

double modular_value(const CharacteristicTriplet& triplet, const GridFunction& f) { return modular(triplet, f).total; }

FNormResult f_norm(const CharacteristicTriplet& triplet, const GridFunction& f, const FNormOptions& options) {
  FNormResult result;
  auto excess = [&](double c) {
    ++result.evaluations;
    return modular_value(triplet, f.scaled(1.0 / c)) - c;
  };
  const double at_one = modular_value(triplet, f);
  ++result.evaluations;
  if (at_one == 0.0) return result;

  double lo = options.bracket_low;
  double hi = options.bracket_high;
  while (excess(lo) <= 0.0) {
    lo *= 1e-3;
    if (lo < 1e-300) {
      result.diagnostic = "norm below 1e-300";
      return result;
    }
  }
  while (excess(hi) > 0.0) {
    hi *= 1e3;
    if (hi > options.bracket_cap) {
      result.infinite = true;
      result.value = kInfinity;
      result.diagnostic = "iota(f/c) exceeds c for every c up to the bracket cap";
      return result;
    }
  }
  while (hi / lo - 1.0 > options.relative_tolerance) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.value = hi;
  return result;
}

double closed_form_modular(ExampleFamily family, const CharacteristicTriplet& triplet, const GridFunction& f) {
  if (!families::matches(triplet, family))
    throw std::invalid_argument("closed_form_modular: triplet is not of family " + std::string(family_name(family)));
  if (!same_domain(triplet.domain(), f.domain())) throw std::invalid_argument("closed_form_modular: domain mismatch");
  double total = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double chi = triplet.control().mass(c);
    const double v = std::abs(f[c]);
    switch (family) {
      case ExampleFamily::poisson:
        total += (std::min(v * v, 1.0) + std::min(v, 1.0)) * 0.5 * chi;
        break;
      case ExampleFamily::compensated_poisson:
        total += (std::min(v * v, 1.0) + std::max(v - 1.0, 0.0)) * chi;
        break;
      case ExampleFamily::stable: {
        const auto& s = triplet.kernel(c).stable_params();
        const double coef = 2.0 / (2.0 - s.p) + std::abs(s.x - s.y) / std::abs(1.0 - s.p);
        total += coef * std::pow(v, s.p) * chi;
        break;
      }
    }
  }
  return total;
}

double integrability_functional(ExampleFamily family, const CharacteristicTriplet& triplet, const GridFunction& f) {
  if (!families::matches(triplet, family))
    throw std::invalid_argument("integrability_functional: triplet is not of family " +
                                std::string(family_name(family)));
  double total = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double chi = triplet.control().mass(c);
    const double v = std::abs(f[c]);
    switch (family) {
      case ExampleFamily::poisson:
        total += std::min(v, 1.0) * 0.5 * chi;
        break;
      case ExampleFamily::compensated_poisson:
        total += std::min(v * v, v) * chi;
        break;
      case ExampleFamily::stable:
        total += std::pow(v, triplet.kernel(c).stable_params().p) * chi;
        break;
    }
  }
  return total;
}

double delta2_margin(const CharacteristicTriplet& triplet, const GridFunction& f) {
  return 5.0 * modular_value(triplet, f) - modular_value(triplet, f.scaled(2.0));
}

}  // namespace levybasis
