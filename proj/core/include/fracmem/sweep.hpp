#pragma once

#include "fracmem/device.hpp"
#include "fracmem/optimizer.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace fracmem {

/// Inclusive arithmetic range lo, lo + step, ... <= hi.
struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::vector<double> values() const;

  bool operator==(const AxisRange&) const = default;
};

struct SweepSpec {
  AxisRange alpha{0.05, 1.0, 0.025};
  AxisRange beta{0.1, 3.0, 0.05};
  OptimizerConfig cfg;
  DeviceParams params;  // alpha and beta are overridden per cell
  SwitchingTask task;
  int jobs = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct PhaseCell {
  double alpha = 0.0;
  double beta = 0.0;
  bool failed = false;  // optimizer threw; result fields are NaN
  OptimizationResult result;
};

struct BoundaryLine {
  double slope = 0.0;      // beta = slope * alpha + intercept
  double intercept = 0.0;
  double residual = 0.0;   // RMS distance in alpha of the transition points from the line
  std::size_t points = 0;
};

struct BoundaryPoint {
  double beta;
  double alpha;
};

struct PhaseDiagram {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<PhaseCell> cells;  // row-major: beta rows, alpha columns

  const PhaseCell& at(std::size_t beta_index, std::size_t alpha_index) const {
    return cells[beta_index * alphas.size() + alpha_index];
  }
  std::size_t failed_count() const;
};

/// Runs optimize_double on every (α, β) cell using spec.jobs worker threads.
/// Cells are keyed by index, and each cell's seed is derived from the base
/// seed and its index, so the output does not depend on scheduling.
/// Throws std::runtime_error when more than 5% of the cells fail.
PhaseDiagram run_sweep(const SweepSpec& spec);

/// Per β row, the α midpoint between the last regime-I cell and the next
/// cell. Rows that are entirely regime I (or contain no I cell) are skipped.
/// Throws std::runtime_error when no row has a transition.
std::vector<BoundaryPoint> locate_boundary_i_ii(const PhaseDiagram& diagram);

/// Per β row, the α midpoint between the last regime-II cell and the first
/// regime-III cell after it.
std::vector<BoundaryPoint> boundary_ii_iii_points(const PhaseDiagram& diagram);

/// Least-squares line through boundary_ii_iii_points. α is the quantized
/// coordinate, so α is regressed on β and the line is reported as
/// β = slope·α + intercept. Throws std::runtime_error with fewer than 3 points.
BoundaryLine fit_boundary_ii_iii(const PhaseDiagram& diagram);

/// CSV with header alpha,beta,regime,q,i1,i2,t_s,converged.
void write_phase_csv(std::ostream& out, const PhaseDiagram& diagram);

/// key = value summary of both boundaries.
void write_boundary_summary(std::ostream& out, const PhaseDiagram& diagram);

} // namespace fracmem
