#pragma once

#include <string_view>
#include <vector>

namespace fracmem {

enum class TrajectorySource { ClosedForm, Oracle };

constexpr std::string_view to_string(TrajectorySource source) {
  return source == TrajectorySource::ClosedForm ? "closed_form" : "oracle";
}

/// Sampled internal state x(t) together with how it was produced.
struct Trajectory {
  std::vector<double> grid;
  std::vector<double> x;
  TrajectorySource source = TrajectorySource::ClosedForm;

  /// Largest pointwise |x - other.x|; grids must match node for node.
  double max_abs_difference(const Trajectory& other) const;
  /// True when every sample satisfies the model constraint x >= 0.
  bool non_negative() const;
};

} // namespace fracmem
