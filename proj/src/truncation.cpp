#include "levybasis/truncation.hpp"

namespace levybasis {

double tau(double alpha) noexcept {
  if (std::abs(alpha) <= 1.0) return alpha;
  return alpha > 0.0 ? 1.0 : -1.0;
}

}  // namespace levybasis
