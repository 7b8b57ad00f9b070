#pragma once

#include "fracmem/analytics.hpp"
#include "fracmem/device.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fracmem {

struct OptimizerConfig {
  double min_pulse_width = 1e-6; // floor on min{T1, T2}
  std::optional<double> i1_upper;
  int restarts = 8;              // Latin-hypercube seeds, on top of the grid seeds
  double tol = 1e-14;            // relative convergence tolerance on Q
  int max_iters = 4000;          // objective evaluations per local search
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate(double t1) const;

  bool operator==(const OptimizerConfig&) const = default;
};

/// Optimal-control regime of a double pulse.
///   I        second pulse pinned at the minimal width (zero/weak current, then a narrow strong pulse)
///   II       wide first pulse, narrower and stronger second pulse
///   III      narrower and stronger first pulse, wide second pulse
///   Interior anything else (width order and amplitude order disagree)
enum class Regime { I, II, III, Interior };

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view text);

enum class Constraint : unsigned {
  T1AtMin = 1U << 0U,
  T2AtMin = 1U << 1U,
  I1AtZero = 1U << 2U,
  I1AtCap = 1U << 3U,
};

class ActiveConstraints {
public:
  void set(Constraint c) { bits_ |= static_cast<unsigned>(c); }
  bool has(Constraint c) const { return (bits_ & static_cast<unsigned>(c)) != 0U; }
  bool none() const { return bits_ == 0U; }
  /// "T2_at_min|I1_at_zero" style, or "none".
  std::string to_string() const;

  friend bool operator==(ActiveConstraints, ActiveConstraints) = default;

private:
  unsigned bits_ = 0U;
};

/// Optimal double pulse [0, t_s] at i1 followed by [t_s, t1] at i2.
/// A single pulse [t_st, t1] is reported in the same shape with i1 = 0 and
/// t_s = t_st.
struct OptimizationResult {
  double i1 = 0.0;
  double i2 = 0.0;
  double t_s = 0.0;
  double t1 = 1.0;
  double q = 0.0;
  ActiveConstraints active;
  Regime regime = Regime::Interior;
  bool converged = false;
  double audit_q = 0.0; // best value on the internal 64x64 seeding grid
  int evaluations = 0;
};

/// Best single end-aligned pulse: full width when α > β/2 (and on the tie),
/// minimal width otherwise.
OptimizationResult optimize_single(const DeviceParams& p, const SwitchingTask& task, const OptimizerConfig& cfg);

/// Minimizes the double-pulse Joule losses over t_s ∈ [w, t1 - w] and
/// I1 ∈ [0, min(I1_max(t_s), i1_upper)].
///
/// The search runs in box coordinates (z, φ) ∈ [0, 1]²: z maps to t_s on a
/// two-sided logarithmic scale that resolves both narrow-pulse ends, and
/// I1 = I1_cap · φ^(1/β), so φ is the share of the switching carried by the
/// first pulse and every probe is feasible. A 64x64
/// grid in (z, φ) supplies seeds; Latin-hypercube seeds are added, each seed
/// is refined by bounded Nelder-Mead, and the best result wins (ties toward
/// lower t_s, then lower I1).
OptimizationResult optimize_double(const DeviceParams& p, const SwitchingTask& task, const OptimizerConfig& cfg);

Regime classify_regime(const OptimizationResult& res, const OptimizerConfig& cfg);

/// Regime-I style single pulse comparison value: Q of the end-aligned pulse
/// of minimal width.
double narrow_single_pulse_q(const DeviceParams& p, const SwitchingTask& task, const OptimizerConfig& cfg);

namespace detail {

/// Two-sided log map of z ∈ [0, 1] onto t_s ∈ [w, t1 - w]; z = 1/2 is t1/2.
double switch_time_from_box(double z, double t1, double w);

} // namespace detail

} // namespace fracmem
