#include "fracmem/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracmem {

double Trajectory::max_abs_difference(const Trajectory& other) const {
  if (other.x.size() != x.size()) {
    throw std::invalid_argument("Trajectory::max_abs_difference: sample counts differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(x[i] - other.x[i]));
  }
  return worst;
}

bool Trajectory::non_negative() const {
  return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; });
}

} // namespace fracmem
