#pragma once

#include <cmath>
#include <limits>

namespace levybasis {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Results above this magnitude are reported as divergent.
inline constexpr double kOverflowBudget = 1e300;

/// The fixed truncation function: identity on [-1, 1], sign outside.
double tau(double alpha) noexcept;

inline bool is_divergent(double v) noexcept { return !std::isfinite(v) || std::abs(v) > kOverflowBudget; }

inline double sign_of(double v) noexcept { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace levybasis
