#pragma once

#include "fracmem/config.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracmem::cli {

/// Each command writes its primary output to cfg.out, or to console when
/// out is empty, and a short progress line per written file to console.
/// Failures are reported by exception; see error_line().
void cmd_simulate(const RunConfig& cfg, std::ostream& console);
void cmd_amplitude(const RunConfig& cfg, std::ostream& console);
void cmd_energy_scan(const RunConfig& cfg, std::ostream& console);
void cmd_optimize(const RunConfig& cfg, std::ostream& console);
void cmd_sweep(const RunConfig& cfg, std::ostream& console);

void dispatch(std::string_view command, const RunConfig& cfg, std::ostream& console);
const std::vector<std::string_view>& command_names();

/// Figure presets compiled into the binary from tools/presets/*.cfg.
const std::vector<std::string_view>& preset_names();
std::string_view preset_text(std::string_view name); // throws std::invalid_argument

/// "out/run.csv" + "alpha0.5" -> "out/run_alpha0.5.csv".
std::string tagged_path(const std::string& out, std::string_view tag);

/// Raised when results were computed but fail their own quality checks
/// (oracle disagreement, optimizer non-convergence).
class CheckFailed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Single-line diagnostic of the form
///   error kind=<config|infeasible|domain|check|runtime> exit=<n> message="..."
/// and the exit code that goes with it.
struct ErrorReport {
  std::string line;
  int exit_code;
};
ErrorReport error_report(const std::exception& e);
std::string error_line(std::string_view kind, int exit_code, std::string_view message);

} // namespace fracmem::cli
