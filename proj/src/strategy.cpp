#include "levybasis/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levybasis {

double PastLedger::integral() const {
  double s = 0.0;
  for (const LedgerEntry& e : entries_) s += e.base * e.increment;
  return s;
}

double PastLedger::effective_integral() const {
  double s = 0.0;
  for (const LedgerEntry& e : entries_) s += e.coefficient * e.increment;
  return s;
}

double PastLedger::effective_running_max() const {
  double s = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    s += entries_[i].coefficient * entries_[i].increment;
    const bool block_end = i + 1 == entries_.size() || entries_[i + 1].block != entries_[i].block;
    if (block_end) best = std::max(best, std::abs(s));
  }
  return best;
}

CoefficientRule::CoefficientRule(double constant) : rule_(constant), label_("constant") {
  if (!std::isfinite(constant)) throw std::invalid_argument("CoefficientRule: constant must be finite");
}

CoefficientRule::CoefficientRule(CoefficientFn fn, std::string label) : rule_(std::move(fn)), label_(std::move(label)) {
  if (!std::get<CoefficientFn>(rule_)) throw std::invalid_argument("CoefficientRule: empty callback");
}

double CoefficientRule::constant_value() const {
  if (!is_constant()) throw std::logic_error("CoefficientRule: not a constant rule");
  return std::get<double>(rule_);
}

double CoefficientRule::evaluate(const PastLedger& past) const {
  if (is_constant()) return std::get<double>(rule_);
  const double v = std::get<CoefficientFn>(rule_)(past);
  if (!std::isfinite(v)) throw std::domain_error("CoefficientRule '" + label_ + "' returned a non-finite value");
  return v;
}

namespace rules {

CoefficientRule constant(double value) { return CoefficientRule(value); }

CoefficientRule sign_of_past_sum(double scale) {
  return CoefficientRule([scale](const PastLedger& past) { return past.integral() < 0.0 ? -scale : scale; },
                         "sign_of_past_sum");
}

CoefficientRule threshold(double value, double level) {
  return CoefficientRule(
      [value, level](const PastLedger& past) { return std::abs(past.integral()) < level ? value : 0.0; },
      "threshold");
}

}  // namespace rules

StepStrategy::StepStrategy(DomainPtr domain, std::vector<StrategyBlock> blocks)
    : domain_(std::move(domain)), blocks_(std::move(blocks)) {
  if (!domain_) throw std::invalid_argument("StepStrategy: missing domain");
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    StrategyBlock& b = blocks_[k];
    if (b.time_index >= domain_->time_intervals())
      throw std::invalid_argument("StepStrategy: block " + std::to_string(k) + " outside the time grid");
    if (k > 0 && b.time_index <= blocks_[k - 1].time_index)
      throw std::invalid_argument("StepStrategy: blocks must be strictly increasing in time");
    std::stable_sort(b.terms.begin(), b.terms.end(),
                     [](const BlockTerm& x, const BlockTerm& y) { return x.box < y.box; });
    for (std::size_t i = 0; i < b.terms.size(); ++i) {
      if (b.terms[i].box >= domain_->box_count())
        throw std::invalid_argument("StepStrategy: block " + std::to_string(k) + " references a missing box");
      if (i > 0 && b.terms[i].box == b.terms[i - 1].box)
        throw std::invalid_argument("StepStrategy: block " + std::to_string(k) + " repeats a box");
    }
  }
}

StepStrategy StepStrategy::from_grid_function(const GridFunction& f) {
  const Domain& d = f.domain();
  std::vector<StrategyBlock> blocks;
  for (std::size_t t = 0; t < d.time_intervals(); ++t) {
    StrategyBlock block{t, {}};
    for (std::size_t b = 0; b < d.box_count(); ++b) block.terms.push_back({b, rules::constant(f[d.cell_index(t, b)])});
    blocks.push_back(std::move(block));
  }
  return StepStrategy(f.domain_ptr(), std::move(blocks));
}

StepStrategy StepStrategy::uniform(DomainPtr domain, const CoefficientRule& rule) {
  std::vector<StrategyBlock> blocks;
  for (std::size_t t = 0; t < domain->time_intervals(); ++t) {
    StrategyBlock block{t, {}};
    for (std::size_t b = 0; b < domain->box_count(); ++b) block.terms.push_back({b, rule});
    blocks.push_back(std::move(block));
  }
  return StepStrategy(std::move(domain), std::move(blocks));
}

bool StepStrategy::deterministic() const {
  for (const auto& b : blocks_)
    for (const auto& t : b.terms)
      if (!t.rule.is_constant()) return false;
  return true;
}

GridFunction StepStrategy::flatten() const {
  if (!deterministic()) throw std::logic_error("StepStrategy::flatten: strategy is not deterministic");
  std::vector<double> v(domain_->cell_count(), 0.0);
  for (const auto& b : blocks_)
    for (const auto& t : b.terms) v[domain_->cell_index(b.time_index, t.box)] = t.rule.constant_value();
  return GridFunction(domain_, std::move(v));
}

StepStrategy StepStrategy::restricted_to(double t) const {
  std::vector<StrategyBlock> kept;
  for (const auto& b : blocks_)
    if (domain_->time_grid()[b.time_index + 1] <= t) kept.push_back(b);
  return StepStrategy(domain_, std::move(kept));
}

}  // namespace levybasis
