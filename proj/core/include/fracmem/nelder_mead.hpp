#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracmem {

struct NelderMeadOptions {
  double initial_step = 0.05; // simplex edge, in box-relative units
  double f_tol = 1e-15;       // relative spread of simplex values
  double x_tol = 1e-12;       // simplex diameter, box-relative
  int max_evals = 4000;
  int max_restarts = 4;       // fresh simplex around the incumbent after convergence
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Nelder-Mead simplex descent inside the box [lower, upper]. Every trial
/// point is projected onto the box before evaluation, so optima on a face
/// or corner are reached exactly. The objective may return +inf to reject a
/// point.
NelderMeadResult nelder_mead_box(const std::function<double(std::span<const double>)>& objective,
                                 std::vector<double> start, std::span<const double> lower,
                                 std::span<const double> upper, const NelderMeadOptions& options = {});

} // namespace fracmem
