#pragma once

#include "fracmem/fraccalc.hpp"

namespace fracmem {

/// Constants of the current-controlled memristor
///
///   R(x) = A + B x,      ᶜD^α x = κ sign(I) |I|^β.
///
/// κ defaults to 1; no other value reproduces the published trajectories.
struct DeviceParams {
  double A = 1.0;
  double B = 5.0;
  double kappa = 1.0;
  FractionalOrder alpha{1.0};
  double beta = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const DeviceParams&) const = default;
};

/// Switch the state from x0 at t = 0 to x1 at t = t1.
struct SwitchingTask {
  double x0 = 0.0;
  double x1 = 1.0;
  double t1 = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  double delta() const noexcept { return x1 - x0; }

  bool operator==(const SwitchingTask&) const = default;
};

/// A + B x. Throws std::domain_error for x < 0.
double memristance(const DeviceParams& p, double x);

/// Ohm's law with the state-dependent memristance.
double voltage(const DeviceParams& p, double x, double current);

/// Right-hand side of the state equation, κ sign(I) |I|^β.
double state_rate(const DeviceParams& p, double current);

} // namespace fracmem
