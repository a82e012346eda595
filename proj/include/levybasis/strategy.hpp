#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levybasis/domain.hpp"
#include "levybasis/modular.hpp"

namespace levybasis {

/// One evaluated term of a step integrand: block coefficient times the cell increment.
struct LedgerEntry {
  std::size_t block = 0;
  std::size_t time_index = 0;
  std::size_t cell = 0;
  /// Coefficient produced by the strategy's own rule.
  double base = 0.0;
  /// Coefficient actually integrated (after pointwise maps and multipliers).
  double coefficient = 0.0;
  double increment = 0.0;
};

/// Read-only view of the entries from blocks strictly before the one being evaluated.
class PastLedger {
 public:
  PastLedger() = default;
  explicit PastLedger(std::span<const LedgerEntry> entries) : entries_(entries) {}

  std::span<const LedgerEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Integral of the strategy itself so far: sum of base * increment.
  double integral() const;
  /// Integral of the integrated coefficients so far.
  double effective_integral() const;
  /// max over completed blocks of |effective partial sum|.
  double effective_running_max() const;

 private:
  std::span<const LedgerEntry> entries_;
};

using CoefficientFn = std::function<double(const PastLedger&)>;

/// Either a constant or a callback on the past ledger.
class CoefficientRule {
 public:
  CoefficientRule(double constant);  // NOLINT(google-explicit-constructor)
  CoefficientRule(CoefficientFn fn, std::string label);

  bool is_constant() const { return std::holds_alternative<double>(rule_); }
  double constant_value() const;
  double evaluate(const PastLedger& past) const;
  const std::string& label() const { return label_; }

 private:
  std::variant<double, CoefficientFn> rule_;
  std::string label_;
};

namespace rules {
CoefficientRule constant(double value);
/// scale * sign(integral so far), with sign(0) = +1.
CoefficientRule sign_of_past_sum(double scale = 1.0);
/// value while |integral so far| < level, 0 afterwards.
CoefficientRule threshold(double value, double level);
}  // namespace rules

struct BlockTerm {
  std::size_t box;
  CoefficientRule rule;
};

/// Coefficients for the block (t_k, t_{k+1}] x boxes.
struct StrategyBlock {
  std::size_t time_index;
  std::vector<BlockTerm> terms;
};

/// Predictable step integrand. Blocks are strictly increasing in time and the terms in a
/// block are ordered by box; a rule sees only the ledger of earlier blocks.
class StepStrategy {
 public:
  StepStrategy(DomainPtr domain, std::vector<StrategyBlock> blocks);

  /// Deterministic strategy with the values of f on every cell.
  static StepStrategy from_grid_function(const GridFunction& f);
  /// The same rule on every cell of the domain.
  static StepStrategy uniform(DomainPtr domain, const CoefficientRule& rule);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const std::vector<StrategyBlock>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  bool deterministic() const;
  /// Grid function of a deterministic strategy; throws otherwise.
  GridFunction flatten() const;
  /// 1_{(0,t]} times the strategy (blocks ending after t are dropped).
  StepStrategy restricted_to(double t) const;

 private:
  DomainPtr domain_;
  std::vector<StrategyBlock> blocks_;
};

}  // namespace levybasis
