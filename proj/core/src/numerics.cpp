#include <cmath>
#include <numbers>

#include "backflow/extended.hpp"

namespace backflow {

double wrap_phase(const Extended& phase) {
  const double turns = std::nearbyint(phase.hi() / kTwoPi.hi());
  double r = (phase - kTwoPi * turns).value();
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  if (r > std::numbers::pi) r -= 2.0 * std::numbers::pi;
  return r;
}

}  // namespace backflow
