#pragma once

#include "fracmem/trajectory.hpp"

#include <functional>
#include <span>
#include <vector>

namespace fracmem {

/// Order of a Caputo derivative / Riemann-Liouville integral, restricted to (0, 1].
class FractionalOrder {
public:
  /// Throws std::domain_error unless 0 < alpha <= 1.
  explicit FractionalOrder(double alpha);

  double value() const noexcept { return alpha_; }
  bool is_integer() const noexcept { return alpha_ == 1.0; }

  friend bool operator==(FractionalOrder, FractionalOrder) = default;

private:
  double alpha_;
};

/// A function of time sampled on a grid and interpreted as piecewise linear
/// between nodes.
///
/// The grid starts at 0 and is non-decreasing. A node may appear twice in a
/// row; the pair encodes a jump discontinuity (left limit first, right limit
/// second), which lets piecewise-constant drives be represented exactly.
class SampledSignal {
public:
  /// Throws std::invalid_argument when the grid invariants are violated.
  SampledSignal(std::vector<double> grid, std::vector<double> values);

  /// Samples a continuous function on a uniform grid k * step, k = 0..n, with
  /// the last node placed exactly at horizon.
  static SampledSignal uniform(const std::function<double(double)>& f, double horizon, double step);

  /// Piecewise-constant signal: levels[k] holds on (breaks[k-1], breaks[k]).
  /// The uniform grid is augmented with a doubled node at every break point.
  /// Requires levels.size() == breaks.size() + 1 and breaks sorted inside (0, horizon).
  static SampledSignal piecewise_constant(std::span<const double> breaks, std::span<const double> levels,
                                          double horizon, double step);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double horizon() const noexcept { return grid_.back(); }

  /// Piecewise-linear interpolant; at a jump the right limit is returned.
  double at(double t) const;

private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Left Riemann-Liouville integral (1/Γ(order)) ∫₀ᵗ (t-τ)^(order-1) f(τ) dτ.
///
/// Product integration: f is the piecewise-linear interpolant of the samples
/// and the kernel is integrated exactly on every cell, so the endpoint
/// singularity carries no quadrature error. O(h²) for smooth f. Any positive
/// order is accepted (order 1 is the ordinary integral, orders above 1 are
/// used for time integrals of fractional trajectories).
///
/// Throws std::domain_error if t lies outside [0, horizon] or order <= 0.
double rl_integral(const SampledSignal& f, double order, double t);
double rl_integral(const SampledSignal& f, FractionalOrder alpha, double t);

/// rl_integral evaluated at every grid node. Grids lying on a uniform lattice
/// (optionally with doubled jump nodes) take an O(N²) table-driven path with
/// no transcendental calls in the inner loop.
std::vector<double> rl_integral_on_grid(const SampledSignal& f, double order);

/// Caputo derivative of order alpha in (0, 1) by the L1 scheme: the
/// finite-difference slope of each cell is integrated against (t-τ)^(-α)
/// exactly. A jump cell contributes its step times the kernel at the jump.
/// Error O(h^(2-α)).
///
/// Throws std::domain_error for alpha == 1 (use an ordinary difference
/// quotient), for t <= 0 or t beyond the horizon.
double caputo_derivative(const SampledSignal& f, FractionalOrder alpha, double t);

/// Solves ᶜD^α x = drive with x(0) = x0 by applying the Riemann-Liouville
/// integral to the drive. Since the right-hand side does not depend on x this
/// is a direct quadrature, not a time-stepping scheme.
Trajectory oracle_solve(const SampledSignal& drive, FractionalOrder alpha, double x0);

} // namespace fracmem
