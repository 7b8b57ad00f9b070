#pragma once

#include "fracmem/analytics.hpp"
#include "fracmem/device.hpp"
#include "fracmem/optimizer.hpp"
#include "fracmem/sweep.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracmem {

/// Parse or validation failure, tagged with where it happened.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string origin, int line, std::string key, const std::string& message);

  const std::string& origin() const noexcept { return origin_; }
  int line() const noexcept { return line_; } // 0 when not tied to a line
  const std::string& key() const noexcept { return key_; }

private:
  std::string origin_;
  int line_;
  std::string key_;
};

/// Everything a command needs. Defaults reproduce the single-pulse setup
/// A = 1, B = 5, x0 = 0, pulse [0.3, 0.55] of amplitude 1, β = 1.
struct RunConfig {
  std::string command;            // optional; used by figure presets

  DeviceParams device;
  SwitchingTask task;
  OptimizerConfig optimizer;

  std::vector<double> alphas;     // empty: use device.alpha
  std::vector<double> betas;      // empty: use device.beta

  // simulate
  std::vector<Pulse> pulses{{0.3, 0.55, 1.0}};
  bool solve_amplitude = false;   // rescale a single pulse so that x(t1) = x1
  double step = 1e-4;             // oracle grid step
  int output_every = 10;          // emit every n-th grid node (jump nodes always)
  double tolerance = 1e-6;        // closed form vs oracle bound

  // amplitude
  double t_st = 0.3;
  double t_e = 0.55;

  // energy-scan: pulse widths T, pulse ends at t1
  AxisRange widths{0.05, 1.0, 0.05};

  // optimize
  bool trajectories = false;      // also write the optimal x(t) per alpha
  int trajectory_samples = 401;

  // sweep
  AxisRange alpha_range{0.05, 1.0, 0.025};
  AxisRange beta_range{0.1, 3.0, 0.05};
  std::string summary;            // boundary summary path; empty: stdout

  int jobs = 1;
  std::string out;

  std::vector<double> alpha_values() const;
  std::vector<double> beta_values() const;

  /// Cross-field checks; throws ConfigError naming the field.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Applies one key = value setting. Unknown keys and malformed values throw
/// ConfigError (origin/line are filled in by the caller).
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Flat "key = value" text; '#' starts a comment; later keys win.
RunConfig parse_config(std::string_view text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Emits every key, with round-trip exact numbers.
std::string serialize_config(const RunConfig& cfg);

/// Names of all recognised keys, in serialization order.
const std::vector<std::string_view>& config_keys();

} // namespace fracmem
