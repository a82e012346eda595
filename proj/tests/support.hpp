#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "levybasis/domain.hpp"

namespace levybasis::testing {

inline DomainPtr line(std::size_t intervals, double horizon = 1.0) {
  return std::make_shared<const Domain>(Domain::uniform_time(horizon, intervals));
}

/// 2 time intervals x 2 unit boxes.
inline DomainPtr grid2x2() {
  return std::make_shared<const Domain>(
      Domain({0.0, 0.5, 1.0}, {Box{{0.0}, {1.0}}, Box{{1.0}, {3.0}}}));
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace levybasis::testing
