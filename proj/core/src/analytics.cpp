#include "fracmem/analytics.hpp"

#include "fracmem/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fracmem {

void Pulse::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("pulse: non-finite field");
  }
  if (t_start < 0.0) {
    throw std::invalid_argument("pulse: t_start must be >= 0, got " + std::to_string(t_start));
  }
  if (!(t_end > t_start)) {
    throw std::invalid_argument("pulse: empty pulse (t_end must exceed t_start)");
  }
}

PulseTrain::PulseTrain(std::vector<Pulse> pulses, double horizon) : pulses_(std::move(pulses)), horizon_(horizon) {
  if (!(std::isfinite(horizon_) && horizon_ > 0.0)) {
    throw std::invalid_argument("pulse train: horizon must be positive");
  }
  for (std::size_t k = 0; k < pulses_.size(); ++k) {
    pulses_[k].validate();
    if (pulses_[k].t_end > horizon_) {
      throw std::invalid_argument("pulse train: pulse " + std::to_string(k) + " ends after the horizon");
    }
    if (k > 0 && pulses_[k].t_start < pulses_[k - 1].t_end) {
      throw std::invalid_argument("pulse train: pulses must be sorted and non-overlapping");
    }
  }
}

double PulseTrain::current_at(double t) const {
  for (const auto& pulse : pulses_) {
    if (t >= pulse.t_start && t < pulse.t_end) {
      return pulse.amplitude;
    }
  }
  // The final pulse is closed on the right so that I(t1) is defined.
  if (!pulses_.empty() && t == pulses_.back().t_end) {
    return pulses_.back().amplitude;
  }
  return 0.0;
}

namespace {

double positive_part_power(double u, double exponent) { return u > 0.0 ? std::pow(u, exponent) : 0.0; }

// t1^α - (t1 - ts)^α without cancellation for small ts.
double power_drop(double alpha, double t1, double ts) {
  return -std::pow(t1, alpha) * std::expm1(alpha * std::log1p(-ts / t1));
}

void require_upward(const SwitchingTask& task, const char* who) {
  task.validate();
  if (!(task.x1 > task.x0)) {
    throw std::domain_error(std::string(who) + ": only upward switching (x1 > x0) is supported");
  }
}

} // namespace

double single_pulse_x(const DeviceParams& p, const Pulse& pulse, double x0, double t) {
  pulse.validate();
  if (!(t >= 0.0)) {
    throw std::domain_error("single_pulse_x: t must be >= 0");
  }
  if (t <= pulse.t_start) {
    return x0;
  }
  const double alpha = p.alpha.value();
  const double scale = state_rate(p, pulse.amplitude) / gamma(alpha + 1.0);
  return x0 + scale * (std::pow(t - pulse.t_start, alpha) - positive_part_power(t - pulse.t_end, alpha));
}

double required_amplitude(const DeviceParams& p, const SwitchingTask& task, double t_st, double t_e) {
  require_upward(task, "required_amplitude");
  if (!(t_st >= 0.0 && t_st < t_e && t_e <= task.t1)) {
    throw std::domain_error("required_amplitude: empty pulse or pulse outside [0, t1] (need 0 <= t_st < t_e <= t1)");
  }
  const double alpha = p.alpha.value();
  const double window = std::pow(task.t1 - t_st, alpha) - positive_part_power(task.t1 - t_e, alpha);
  return std::pow(gamma(alpha + 1.0) * task.delta() / (p.kappa * window), 1.0 / p.beta);
}

double normalized_trajectory(FractionalOrder alpha, const SwitchingTask& task, double t_st, double t_e, double t) {
  task.validate();
  if (!(t_st >= 0.0 && t_st < t_e && t_e <= task.t1)) {
    throw std::domain_error("normalized_trajectory: need 0 <= t_st < t_e <= t1");
  }
  if (t < t_e) {
    throw std::domain_error("normalized_trajectory: defined only after the pulse (t >= t_e)");
  }
  if (t == task.t1) {
    return task.delta();
  }
  const double a = alpha.value();
  const double num = std::pow(t - t_st, a) - std::pow(t - t_e, a);
  const double den = std::pow(task.t1 - t_st, a) - std::pow(task.t1 - t_e, a);
  return task.delta() * num / den;
}

double single_pulse_q(const DeviceParams& p, const Pulse& pulse, double x0) {
  pulse.validate();
  const double alpha = p.alpha.value();
  const double width = pulse.width();
  const double i = pulse.amplitude;
  return i * i *
         ((p.A + p.B * x0) * width +
          p.B * state_rate(p, i) * std::pow(width, alpha + 1.0) / gamma(alpha + 2.0));
}

double single_pulse_q_end_aligned(const DeviceParams& p, const SwitchingTask& task, double t_st) {
  task.validate();
  if (!(t_st >= 0.0 && t_st < task.t1)) {
    throw std::domain_error("single_pulse_q_end_aligned: need 0 <= t_st < t1");
  }
  const double alpha = p.alpha.value();
  const double dx = task.delta();
  return std::pow(gamma(alpha + 1.0) * dx / p.kappa, 2.0 / p.beta) *
         (p.A + p.B * task.x0 + p.B * dx / (alpha + 1.0)) *
         std::pow(task.t1 - t_st, 1.0 - 2.0 * alpha / p.beta);
}

double two_pulse_x(const DeviceParams& p, double i1, double i2, double t_s, double t1, double x0, double t) {
  if (!(t_s >= 0.0 && t_s <= t1)) {
    throw std::domain_error("two_pulse_x: need 0 <= t_s <= t1");
  }
  if (!(t >= 0.0 && t <= t1)) {
    throw std::domain_error("two_pulse_x: t outside [0, t1]");
  }
  const double alpha = p.alpha.value();
  const double g1 = gamma(alpha + 1.0);
  const double r1 = state_rate(p, i1);
  if (t <= t_s) {
    return x0 + r1 * std::pow(t, alpha) / g1;
  }
  const double r2 = state_rate(p, i2);
  const double tail = std::pow(t - t_s, alpha);
  return x0 + (r1 * (std::pow(t, alpha) - tail) + r2 * tail) / g1;
}

double first_pulse_amplitude_limit(const DeviceParams& p, const SwitchingTask& task, double t_s) {
  require_upward(task, "first_pulse_amplitude_limit");
  if (!(t_s >= 0.0 && t_s < task.t1)) {
    throw std::domain_error("first_pulse_amplitude_limit: need 0 <= t_s < t1");
  }
  if (t_s == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double alpha = p.alpha.value();
  return std::pow(gamma(alpha + 1.0) * task.delta() / (p.kappa * power_drop(alpha, task.t1, t_s)), 1.0 / p.beta);
}

namespace {

// Δx - κ I1^β (t1^α - (t1-ts)^α) / Γ(1+α): the part of the target the second
// pulse still has to supply, measured at t1.
double remaining_budget(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s) {
  if (!(i1 >= 0.0)) {
    throw std::domain_error("double pulse: first-pulse amplitude must be >= 0");
  }
  const double alpha = p.alpha.value();
  const double base =
      task.delta() - p.kappa * std::pow(i1, p.beta) * power_drop(alpha, task.t1, t_s) / gamma(alpha + 1.0);
  if (base < 0.0) {
    if (base < -1e-12 * task.delta()) {
      throw InfeasibleError("double pulse: first pulse overshoots the target (I1 above its feasibility limit)");
    }
    return 0.0;
  }
  return base;
}

} // namespace

double second_pulse_amplitude(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s) {
  require_upward(task, "second_pulse_amplitude");
  if (!(t_s >= 0.0 && t_s < task.t1)) {
    throw std::domain_error("second_pulse_amplitude: need 0 <= t_s < t1");
  }
  const double alpha = p.alpha.value();
  const double base = remaining_budget(p, task, i1, t_s);
  return std::pow(gamma(alpha + 1.0) * base / (p.kappa * std::pow(task.t1 - t_s, alpha)), 1.0 / p.beta);
}

double two_pulse_q_compact(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s) {
  task.validate();
  if (task.x0 != 0.0 || task.x1 != 1.0) {
    throw std::domain_error("two_pulse_q_compact: compact form holds only for x0 = 0, x1 = 1");
  }
  if (!(t_s >= 0.0 && t_s < task.t1)) {
    throw std::domain_error("two_pulse_q_compact: need 0 <= t_s < t1");
  }
  const double alpha = p.alpha.value();
  const double beta = p.beta;
  const double g1 = gamma(1.0 + alpha);
  const double g2 = gamma(2.0 + alpha);
  const double t1 = task.t1;
  const double rest = t1 - t_s;
  const double i1b = std::pow(i1, beta);

  // remaining_budget() * Γ(1+α)/κ is the bracket raised to 2/β.
  const double bracket = remaining_budget(p, task, i1, t_s) * g1 / p.kappa;
  const double second = std::pow(rest, -2.0 * alpha / beta) / g2 *
                        (p.B * i1b * p.kappa * (std::pow(t1, alpha) - std::pow(t_s, alpha)) * t_s +
                         rest * (p.A * (1.0 + alpha) + p.B) * g1) *
                        std::pow(bracket, 2.0 / beta);
  const double first = i1 * i1 * t_s * (p.A + p.B * p.kappa * i1b * std::pow(t_s, alpha) / g2);
  return second + first;
}

PulseTrain two_pulse_train(double i1, double i2, double t_s, double t1) {
  std::vector<Pulse> pulses;
  if (t_s > 0.0) {
    pulses.push_back({0.0, t_s, i1});
  }
  if (t_s < t1) {
    pulses.push_back({t_s, t1, i2});
  }
  return PulseTrain(std::move(pulses), t1);
}

double two_pulse_q_superposed(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s) {
  const double i2 = second_pulse_amplitude(p, task, i1, t_s);
  return pulse_train_q(p, two_pulse_train(i1, i2, t_s, task.t1), task.x0);
}

double two_pulse_q(const DeviceParams& p, const SwitchingTask& task, double i1, double t_s) {
  if (task.x0 == 0.0 && task.x1 == 1.0) {
    return two_pulse_q_compact(p, task, i1, t_s);
  }
  return two_pulse_q_superposed(p, task, i1, t_s);
}

double pulse_train_x(const DeviceParams& p, const PulseTrain& train, double x0, double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("pulse_train_x: t must be >= 0");
  }
  double x = x0;
  for (const auto& pulse : train.pulses()) {
    x += single_pulse_x(p, pulse, 0.0, t);
  }
  return x;
}

double pulse_train_q(const DeviceParams& p, const PulseTrain& train, double x0) {
  const double alpha = p.alpha.value();
  const double g2 = gamma(alpha + 2.0);
  // ∫_a^b (t - s)_+^α dt = F(b - s) - F(a - s) with F(u) = u_+^(α+1) / (α+1).
  auto ramp_area = [alpha](double a, double b, double s) {
    return positive_part_power(b - s, alpha + 1.0) - positive_part_power(a - s, alpha + 1.0);
  };

  double q = 0.0;
  for (const auto& seg : train.pulses()) {
    double state_area = 0.0; // Γ(α+2) ∫_seg (x - x0) dt
    for (const auto& src : train.pulses()) {
      if (src.t_start >= seg.t_end) {
        break;
      }
      state_area += state_rate(p, src.amplitude) * (ramp_area(seg.t_start, seg.t_end, src.t_start) -
                                                    ramp_area(seg.t_start, seg.t_end, src.t_end));
    }
    const double i = seg.amplitude;
    q += i * i * ((p.A + p.B * x0) * seg.width() + p.B * state_area / g2);
  }
  return q;
}

Trajectory closed_form_trajectory(const DeviceParams& p, const PulseTrain& train, double x0,
                                  std::span<const double> grid) {
  Trajectory out;
  out.grid.assign(grid.begin(), grid.end());
  out.x.reserve(grid.size());
  for (double t : grid) {
    out.x.push_back(pulse_train_x(p, train, x0, t));
  }
  out.source = TrajectorySource::ClosedForm;
  return out;
}

namespace {

template <typename LevelFn>
SampledSignal sample_train(const PulseTrain& train, double step, LevelFn level) {
  std::vector<double> breaks;
  for (const auto& pulse : train.pulses()) {
    for (double edge : {pulse.t_start, pulse.t_end}) {
      if (edge > 0.0 && edge < train.horizon() && (breaks.empty() || breaks.back() != edge)) {
        breaks.push_back(edge);
      }
    }
  }
  std::vector<double> levels;
  levels.reserve(breaks.size() + 1);
  double left = 0.0;
  for (std::size_t k = 0; k <= breaks.size(); ++k) {
    const double right = k < breaks.size() ? breaks[k] : train.horizon();
    levels.push_back(level(train.current_at(0.5 * (left + right))));
    left = right;
  }
  return SampledSignal::piecewise_constant(breaks, levels, train.horizon(), step);
}

} // namespace

SampledSignal drive_signal(const DeviceParams& p, const PulseTrain& train, double step) {
  return sample_train(train, step, [&p](double current) { return state_rate(p, current); });
}

SampledSignal current_signal(const PulseTrain& train, double step) {
  return sample_train(train, step, [](double current) { return current; });
}

} // namespace fracmem
