#pragma once

#include "fracmem/device.hpp"
#include "fracmem/fraccalc.hpp"
#include "fracmem/trajectory.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace fracmem {

/// Raised when the requested switching cannot be reached with non-negative
/// currents, e.g. a first pulse that already overshoots the target.
class InfeasibleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Constant-current segment [t_start, t_end].
struct Pulse {
  double t_start = 0.0;
  double t_end = 0.0;
  double amplitude = 0.0;

  double width() const noexcept { return t_end - t_start; }
  void validate() const;

  bool operator==(const Pulse&) const = default;
};

/// Ordered, non-overlapping pulses inside [0, horizon]. Current is zero
/// outside the pulses.
class PulseTrain {
public:
  PulseTrain(std::vector<Pulse> pulses, double horizon);

  const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
  double horizon() const noexcept { return horizon_; }
  bool empty() const noexcept { return pulses_.empty(); }

  /// Current at time t (right-continuous at pulse edges).
  double current_at(double t) const;

private:
  std::vector<Pulse> pulses_;
  double horizon_;
};

// ---- single pulse -----------------------------------------------------------

/// Closed-form state under one pulse: x0 before the pulse, a fractional ramp
/// during it, and power-law relaxation toward x0 afterwards (for α < 1).
double single_pulse_x(const DeviceParams& p, const Pulse& pulse, double x0, double t);

/// Amplitude of the pulse [t_st, t_e] that lands exactly on task.x1 at t1.
/// Upward switching only; throws std::domain_error on empty pulses or x1 <= x0.
double required_amplitude(const DeviceParams& p, const SwitchingTask& task, double t_st, double t_e);

/// Post-pulse state increment x(t) - x0 when the amplitude comes from
/// required_amplitude. Independent of β and κ. Requires t >= t_e.
double normalized_trajectory(FractionalOrder alpha, const SwitchingTask& task, double t_st, double t_e,
                             double t);

/// Joule losses ∫ I² R(x) dt of a single pulse starting from state x0.
double single_pulse_q(const DeviceParams& p, const Pulse& pulse, double x0);

/// Joule losses of the pulse [t_st, t1] carrying the required amplitude:
///   (Γ(α+1)Δx/κ)^(2/β) (A + B x0 + B Δx/(α+1)) (t1 - t_st)^(1 - 2α/β).
double single_pulse_q_end_aligned(const DeviceParams& p, const SwitchingTask& task, double t_st);

// ---- two back-to-back pulses on [0, t_s] and [t_s, t1] ------------------------

double two_pulse_x(const DeviceParams& p, double i1, double i2, double t_s, double t1, double x0, double t);

/// Largest first-pulse amplitude for which a non-negative second pulse can
/// still land on x1 (the second pulse is zero at the limit). Infinite at t_s = 0.
double first_pulse_amplitude_limit(const DeviceParams& p, const SwitchingTask& task, double t_s);

/// Second-pulse amplitude that closes the switching at t1.
/// Throws InfeasibleError if i1 exceeds first_pulse_amplitude_limit.
double second_pulse_amplitude(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s);

/// Total Joule losses of the double pulse with I2 eliminated. Uses the
/// compact closed form for the 0 -> 1 task and the superposition form
/// otherwise.
double two_pulse_q(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s);

/// The compact closed form, valid only for x0 = 0, x1 = 1 (throws otherwise).
double two_pulse_q_compact(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s);

/// The same quantity assembled from per-pulse fractional ramps; any task.
double two_pulse_q_superposed(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s);

/// Builds the double pulse as a train, dropping a zero-width first pulse.
PulseTrain two_pulse_train(double i1, double i2, double t_s, double t1);

// ---- arbitrary trains (superposition of single-pulse solutions) ----------------

double pulse_train_x(const DeviceParams& p, const PulseTrain& train, double x0, double t);

/// Joule losses of a whole train, summed from closed-form segment integrals.
double pulse_train_q(const DeviceParams& p, const PulseTrain& train, double x0);

Trajectory closed_form_trajectory(const DeviceParams& p, const PulseTrain& train, double x0,
                                  std::span<const double> grid);

/// κ sign(I)|I|^β of the train as a piecewise-constant sampled signal, ready
/// for oracle_solve. Pulse edges become doubled jump nodes.
SampledSignal drive_signal(const DeviceParams& p, const PulseTrain& train, double step);

/// The current waveform I(t) sampled the same way.
SampledSignal current_signal(const PulseTrain& train, double step);

} // namespace fracmem
