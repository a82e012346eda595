#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace levybasis {

/// Axis-aligned half-open box in R^d.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  double volume() const;
  std::size_t dimension() const { return lower.size(); }
  bool operator==(const Box&) const = default;
};

/// Location of one space-time cell (t_start, t_end] x box.
struct CellRef {
  std::size_t index;
  std::size_t time_index;
  std::size_t box;
  double t_start;
  double t_end;
};

/// Finite rectangular cell complex over [0, T] x O. Cells are enumerated
/// time-major: index = time_index * box_count() + box.
class Domain {
 public:
  Domain(std::vector<double> time_grid, std::vector<Box> boxes);

  std::size_t time_intervals() const { return time_grid_.size() - 1; }
  std::size_t box_count() const { return boxes_.size(); }
  std::size_t cell_count() const { return time_intervals() * box_count(); }
  double horizon() const { return time_grid_.back(); }

  std::size_t cell_index(std::size_t time_index, std::size_t box) const;
  CellRef cell(std::size_t index) const;
  double cell_volume(std::size_t index) const;

  const std::vector<double>& time_grid() const { return time_grid_; }
  const Box& box(std::size_t b) const { return boxes_.at(b); }

  /// Single space box [0,1] and the given time grid.
  static Domain unit_space(std::vector<double> time_grid);
  /// [0, T] split into n equal intervals over the unit space box.
  static Domain uniform_time(double horizon, std::size_t intervals);

  bool operator==(const Domain&) const = default;

 private:
  std::vector<double> time_grid_;
  std::vector<Box> boxes_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/// Sorted set of distinct cell indices; stands in for a set of the delta-ring.
using CellSet = std::vector<std::size_t>;

CellSet all_cells(const Domain& domain);
/// Sorts, de-duplicates and range-checks.
CellSet make_cell_set(const Domain& domain, std::vector<std::size_t> cells);

/// Control measure chi with density constant on each cell.
class ControlMeasure {
 public:
  ControlMeasure(const Domain& domain, std::vector<double> density);
  static ControlMeasure uniform(const Domain& domain, double density);

  double mass(std::size_t cell) const { return mass_.at(cell); }
  double mass(std::span<const std::size_t> cells) const;
  double density(std::size_t cell) const { return density_.at(cell); }
  std::size_t cell_count() const { return mass_.size(); }

  ControlMeasure scaled(double factor) const;

  bool operator==(const ControlMeasure&) const = default;

 private:
  ControlMeasure() = default;
  std::vector<double> density_;
  std::vector<double> mass_;
};

}  // namespace levybasis
