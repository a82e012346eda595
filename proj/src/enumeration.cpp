#include "levybasis/enumeration.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace levybasis {

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("exact_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mantissa = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  boost::multiprecision::cpp_int num = mantissa;
  boost::multiprecision::cpp_int den = 1;
  if (e >= 0) {
    num <<= e;
  } else {
    den <<= -e;
  }
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

void ToyLaw::validate() const {
  if (values.empty()) throw std::invalid_argument("ToyLaw: no atoms");
  if (values.size() != weights.size()) throw std::invalid_argument("ToyLaw: values and weights differ in length");
  if (scale <= 0) throw std::invalid_argument("ToyLaw: scale must be positive");
  std::int64_t total = 0;
  for (std::int64_t w : weights) {
    if (w <= 0) throw std::invalid_argument("ToyLaw: weights must be positive");
    total += w;
  }
  (void)total;
}

Rational ToyLaw::value(std::size_t i) const { return Rational(values.at(i), scale); }

Rational ToyLaw::probability(std::size_t i) const {
  std::int64_t total = 0;
  for (std::int64_t w : weights) total += w;
  return Rational(weights.at(i), total);
}

Rational exact_tau(const Rational& x) {
  if (x > 1) return Rational(1);
  if (x < -1) return Rational(-1);
  return x;
}

Rational abs_min_one(const Rational& x) {
  const Rational a = x < 0 ? Rational(-x) : x;
  return a > 1 ? Rational(1) : a;
}

Rational ToyLaw::tau_mean() const {
  Rational s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += probability(i) * exact_tau(value(i));
  return s;
}

Rational ToyLaw::tau_sq_mean() const {
  Rational s = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    const Rational t = exact_tau(value(i));
    s += probability(i) * t * t;
  }
  return s;
}

SumControlExact sum_control_exact(const std::vector<ToyLaw>& laws) {
  for (const auto& l : laws) l.validate();
  SumControlExact out;
  out.lhs = 0;
  out.tau_sq_sum = 0;
  out.tau_sum = 0;
  for_each_outcome(laws, [&](const std::vector<std::size_t>& idx, const Rational& p) {
    Rational s = 0;
    for (std::size_t k = 0; k < laws.size(); ++k) s += laws[k].value(idx[k]);
    out.lhs += p * abs_min_one(s);
  });
  for (const auto& l : laws) {
    out.tau_sq_sum += l.tau_sq_mean();
    out.tau_sum += l.tau_mean();
  }
  // lhs <= sqrt(A) + B  iff  lhs - B <= 0 or (lhs - B)^2 <= A.
  const Rational a = out.tau_sq_sum + out.tau_sum * out.tau_sum;
  const Rational gap = out.lhs - out.tau_sq_sum;
  out.holds = gap <= 0 || gap * gap <= a;
  out.lhs_value = to_double(out.lhs);
  out.rhs_value = std::sqrt(to_double(a)) + to_double(out.tau_sq_sum);
  return out;
}

namespace {

/// Cells touched by the strategy, in ledger order, with the block of each.
struct CellOrder {
  std::vector<std::size_t> cells;
  std::vector<std::size_t> block;
};

CellOrder cell_order(const StepStrategy& strategy, const ToyField& toy) {
  const Domain& d = strategy.domain();
  if (toy.laws.size() != d.cell_count()) throw std::invalid_argument("ToyField: need one law per domain cell");
  CellOrder out;
  for (std::size_t k = 0; k < strategy.block_count(); ++k) {
    const StrategyBlock& b = strategy.blocks()[k];
    for (const BlockTerm& t : b.terms) {
      const std::size_t c = d.cell_index(b.time_index, t.box);
      toy.laws[c].validate();
      out.cells.push_back(c);
      out.block.push_back(k);
    }
  }
  return out;
}

IntegrationResult run_on_outcome(const StepStrategy& strategy, const ToyField& toy, const CellOrder& order,
                                 const std::vector<std::size_t>& idx, const Modulation& modulation = {}) {
  std::vector<double> values(toy.laws.size(), 0.0);
  for (std::size_t j = 0; j < order.cells.size(); ++j) {
    const ToyLaw& law = toy.laws[order.cells[j]];
    values[order.cells[j]] = static_cast<double>(law.values[idx[j]]) / static_cast<double>(law.scale);
  }
  return run_strategy(strategy, [&](std::size_t cell) { return values[cell]; }, modulation);
}

std::vector<ToyLaw> ordered_laws(const ToyField& toy, const CellOrder& order) {
  std::vector<ToyLaw> laws;
  for (std::size_t c : order.cells) laws.push_back(toy.laws[c]);
  return laws;
}

double safe_ratio(const Rational& num, const Rational& den) {
  if (den == 0) return num == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return to_double(num / den);
}

}  // namespace

TangencyExact tangency_exact(const StepStrategy& strategy, const ToyField& toy) {
  const CellOrder order = cell_order(strategy, toy);
  const std::size_t n = order.cells.size();
  std::vector<ToyLaw> joint = ordered_laws(toy, order);
  const std::vector<ToyLaw> copy = joint;
  joint.insert(joint.end(), copy.begin(), copy.end());

  using Law = std::map<Rational, Rational>;
  // (block, past primary indices, past copy indices) -> conditional (unnormalized) laws.
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::pair<Law, Law>> table;
  for_each_outcome(joint, [&](const std::vector<std::size_t>& idx, const Rational& p) {
    const std::vector<std::size_t> primary(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n));
    const IntegrationResult run = run_on_outcome(strategy, toy, order, primary);
    std::vector<Rational> x(strategy.block_count(), Rational(0));
    std::vector<Rational> y(strategy.block_count(), Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      const Rational coef = exact_rational(run.ledger[j].coefficient);
      const ToyLaw& law = toy.laws[order.cells[j]];
      x[order.block[j]] += coef * law.value(idx[j]);
      y[order.block[j]] += coef * law.value(idx[n + j]);
    }
    for (std::size_t k = 0; k < strategy.block_count(); ++k) {
      std::vector<std::size_t> past;
      for (std::size_t j = 0; j < n; ++j)
        if (order.block[j] < k) past.push_back(idx[j]);
      for (std::size_t j = 0; j < n; ++j)
        if (order.block[j] < k) past.push_back(idx[n + j]);
      auto& entry = table[{k, past}];
      entry.first[x[k]] += p;
      entry.second[y[k]] += p;
    }
  });

  TangencyExact out;
  out.equal = true;
  for (const auto& [where, laws] : table) {
    ++out.conditions_checked;
    if (laws.first != laws.second && out.equal) {
      out.equal = false;
      out.mismatch = "block " + std::to_string(where.first);
    }
  }
  return out;
}

DecouplingExact decoupling_exact(const StepStrategy& strategy, const ToyField& toy) {
  const CellOrder order = cell_order(strategy, toy);
  const std::size_t n = order.cells.size();
  const std::size_t blocks = strategy.block_count();
  if (blocks > 12) throw std::invalid_argument("decoupling_exact: more than 12 blocks");
  std::vector<ToyLaw> joint = ordered_laws(toy, order);
  const std::vector<ToyLaw> copy = joint;
  joint.insert(joint.end(), copy.begin(), copy.end());

  DecouplingExact out;
  out.ex = 0;
  out.ey = 0;
  std::vector<Rational> signed_means(std::size_t{1} << blocks, Rational(0));
  for_each_outcome(joint, [&](const std::vector<std::size_t>& idx, const Rational& p) {
    const std::vector<std::size_t> primary(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n));
    const IntegrationResult run = run_on_outcome(strategy, toy, order, primary);
    std::vector<Rational> x(blocks, Rational(0));
    Rational sy = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational coef = exact_rational(run.ledger[j].coefficient);
      const ToyLaw& law = toy.laws[order.cells[j]];
      x[order.block[j]] += coef * law.value(idx[j]);
      sy += coef * law.value(idx[n + j]);
    }
    Rational sx = 0;
    for (const Rational& v : x) sx += v;
    out.ex += p * abs_min_one(sx);
    out.ey += p * abs_min_one(sy);
    for (std::size_t mask = 0; mask < signed_means.size(); ++mask) {
      Rational s = 0;
      for (std::size_t k = 0; k < blocks; ++k) s += (mask >> k) & 1U ? Rational(-x[k]) : x[k];
      signed_means[mask] += p * abs_min_one(s);
    }
  });
  out.max_sign = 0;
  for (const Rational& m : signed_means)
    if (m > out.max_sign) out.max_sign = m;
  out.r1 = safe_ratio(out.ex, out.ey);
  out.r2 = safe_ratio(out.ey, out.max_sign);
  out.finite = std::isfinite(out.r1) && std::isfinite(out.r2);
  return out;
}

MaximalExact maximal_inequality_exact(const StepStrategy& strategy, const ToyField& toy, const GammaFamily& family,
                                      const std::vector<double>& c_grid) {
  const CellOrder order = cell_order(strategy, toy);
  const std::vector<ToyLaw> laws = ordered_laws(toy, order);
  const std::size_t members = family.size();
  std::vector<Rational> levels;
  for (double c : c_grid) {
    if (!(c > 0.0)) throw std::invalid_argument("maximal_inequality_exact: levels must be positive");
    levels.push_back(exact_rational(c));
  }
  // sup_hit[m][i] = P(sup_t |S| >= c_i), end_hit[m][i] = P(|S_T| >= c_i) for member m.
  std::vector<std::vector<Rational>> sup_hit(members, std::vector<Rational>(levels.size(), Rational(0)));
  std::vector<std::vector<Rational>> end_hit = sup_hit;
  for_each_outcome(laws, [&](const std::vector<std::size_t>& idx, const Rational& p) {
    for (std::size_t m = 0; m < members; ++m) {
      Modulation mod;
      mod.gamma = &family.members()[m];
      const IntegrationResult run = run_on_outcome(strategy, toy, order, idx, mod);
      Rational s = 0;
      Rational peak = 0;
      for (std::size_t j = 0; j < run.ledger.size(); ++j) {
        s += exact_rational(run.ledger[j].coefficient) * toy.laws[order.cells[j]].value(idx[j]);
        const bool block_end = j + 1 == run.ledger.size() || run.ledger[j + 1].block != run.ledger[j].block;
        const Rational a = s < 0 ? Rational(-s) : s;
        if (block_end && a > peak) peak = a;
      }
      const Rational end = s < 0 ? Rational(-s) : s;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        if (peak >= levels[i]) sup_hit[m][i] += p;
        if (end >= levels[i]) end_hit[m][i] += p;
      }
    }
  });

  MaximalExact out;
  out.holds = true;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    Rational rhs = 0;
    for (std::size_t m = 0; m < members; ++m)
      if (end_hit[m][i] > rhs) rhs = end_hit[m][i];
    for (std::size_t m = 0; m < members; ++m) {
      ++out.comparisons;
      const Rational margin = rhs - sup_hit[m][i];
      if (margin < 0) out.holds = false;
      const double md = to_double(margin);
      if (md < out.worst_margin) {
        out.worst_margin = md;
        char buf[64];
        std::snprintf(buf, sizeof buf, " at c=%.17g", c_grid[i]);
        out.worst_case = family.members()[m].label + buf;
      }
    }
  }
  return out;
}

}  // namespace levybasis
