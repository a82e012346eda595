#include "levybasis/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace levybasis {

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

namespace {

bool interiors_overlap(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    if (std::max(a.lower[i], b.lower[i]) >= std::min(a.upper[i], b.upper[i])) return false;
  }
  return true;
}

}  // namespace

Domain::Domain(std::vector<double> time_grid, std::vector<Box> boxes)
    : time_grid_(std::move(time_grid)), boxes_(std::move(boxes)) {
  if (time_grid_.size() < 2) throw std::invalid_argument("time_grid: need at least two points");
  if (time_grid_.front() != 0.0) throw std::invalid_argument("time_grid: must start at 0");
  for (std::size_t i = 1; i < time_grid_.size(); ++i) {
    if (!(time_grid_[i] > time_grid_[i - 1]) || !std::isfinite(time_grid_[i]))
      throw std::invalid_argument("time_grid[" + std::to_string(i) + "]: grid must be strictly increasing");
  }
  if (boxes_.empty()) throw std::invalid_argument("space_boxes: need at least one box");
  const std::size_t d = boxes_.front().dimension();
  for (std::size_t b = 0; b < boxes_.size(); ++b) {
    const Box& box = boxes_[b];
    const std::string where = "space_boxes[" + std::to_string(b) + "]";
    if (box.lower.size() != box.upper.size() || box.dimension() != d)
      throw std::invalid_argument(where + ": inconsistent dimension");
    for (std::size_t i = 0; i < d; ++i) {
      if (!std::isfinite(box.lower[i]) || !std::isfinite(box.upper[i]) || !(box.upper[i] > box.lower[i]))
        throw std::invalid_argument(where + ": box must have positive finite extent");
    }
    for (std::size_t o = 0; o < b; ++o) {
      if (interiors_overlap(box, boxes_[o]))
        throw std::invalid_argument(where + ": overlaps space_boxes[" + std::to_string(o) + "]");
    }
  }
}

std::size_t Domain::cell_index(std::size_t time_index, std::size_t box) const {
  if (time_index >= time_intervals() || box >= box_count()) throw std::out_of_range("cell_index");
  return time_index * box_count() + box;
}

CellRef Domain::cell(std::size_t index) const {
  if (index >= cell_count()) throw std::out_of_range("cell");
  const std::size_t t = index / box_count();
  return {index, t, index % box_count(), time_grid_[t], time_grid_[t + 1]};
}

double Domain::cell_volume(std::size_t index) const {
  const CellRef c = cell(index);
  return (c.t_end - c.t_start) * boxes_[c.box].volume();
}

Domain Domain::unit_space(std::vector<double> time_grid) {
  return Domain(std::move(time_grid), {Box{{0.0}, {1.0}}});
}

Domain Domain::uniform_time(double horizon, std::size_t intervals) {
  if (intervals == 0 || !(horizon > 0.0)) throw std::invalid_argument("uniform_time: bad grid");
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) grid[i] = horizon * static_cast<double>(i) / static_cast<double>(intervals);
  grid.back() = horizon;
  return unit_space(std::move(grid));
}

CellSet all_cells(const Domain& domain) {
  CellSet cells(domain.cell_count());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  return cells;
}

CellSet make_cell_set(const Domain& domain, std::vector<std::size_t> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (!cells.empty() && cells.back() >= domain.cell_count()) throw std::out_of_range("cell set: index out of range");
  return cells;
}

ControlMeasure::ControlMeasure(const Domain& domain, std::vector<double> density) : density_(std::move(density)) {
  if (density_.size() != domain.cell_count()) throw std::invalid_argument("control_density: one value per cell required");
  mass_.resize(density_.size());
  for (std::size_t c = 0; c < density_.size(); ++c) {
    if (!(density_[c] >= 0.0) || !std::isfinite(density_[c]))
      throw std::invalid_argument("control_density[" + std::to_string(c) + "]: must be finite and >= 0");
    mass_[c] = density_[c] * domain.cell_volume(c);
  }
}

ControlMeasure ControlMeasure::uniform(const Domain& domain, double density) {
  return ControlMeasure(domain, std::vector<double>(domain.cell_count(), density));
}

double ControlMeasure::mass(std::span<const std::size_t> cells) const {
  double total = 0.0;
  for (std::size_t c : cells) total += mass_.at(c);
  return total;
}

ControlMeasure ControlMeasure::scaled(double factor) const {
  if (!(factor >= 0.0)) throw std::invalid_argument("ControlMeasure::scaled: factor must be >= 0");
  ControlMeasure out;
  out.density_ = density_;
  out.mass_ = mass_;
  for (auto& d : out.density_) d *= factor;
  for (auto& m : out.mass_) m *= factor;
  return out;
}

}  // namespace levybasis
