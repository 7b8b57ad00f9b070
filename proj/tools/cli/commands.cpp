#include "commands.hpp"

#include "fracmem/analytics.hpp"
#include "fracmem/csv.hpp"
#include "fracmem/fraccalc.hpp"
#include "fracmem/optimizer.hpp"
#include "fracmem/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace fracmem::cli {
namespace {

struct Combo {
  double alpha;
  double beta;
  std::string tag;
};

std::vector<Combo> combos(const RunConfig& cfg) {
  const auto alphas = cfg.alpha_values();
  const auto betas = cfg.beta_values();
  std::vector<Combo> out;
  for (double b : betas) {
    for (double a : alphas) {
      std::string tag = "alpha" + format_number(a);
      if (betas.size() > 1) tag += "_beta" + format_number(b);
      out.push_back({a, b, std::move(tag)});
    }
  }
  return out;
}

DeviceParams device_for(const RunConfig& cfg, const Combo& c) {
  DeviceParams p = cfg.device;
  p.alpha = FractionalOrder(c.alpha);
  p.beta = c.beta;
  return p;
}

// A file, or the console when path is empty.
class Output {
public:
  Output(const std::string& path, std::ostream& console) : path_(path), os_(&console) {
    if (path.empty()) return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    os_ = &file_;
  }

  std::ostream& stream() { return *os_; }
  bool is_file() const { return !path_.empty(); }

  void close() {
    os_->flush();
    if (!*os_) throw std::runtime_error("write failed for " + (path_.empty() ? std::string("<stdout>") : path_));
    if (file_.is_open()) file_.close();
  }

private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_;
};

// Runs body(i) for i in [0, n) on up to jobs threads; results must be keyed by i.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t extra = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
    for (std::size_t k = 1; k < extra; ++k) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void write_report_line(std::ostream& os, std::string_view key, const std::string& value) {
  os << key << " = " << value << '\n';
}

std::string quoted(std::string_view text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

struct SimulationStats {
  std::size_t rows = 0;
  double max_abs_error = 0.0;
};

SimulationStats simulate_one(const RunConfig& cfg, const Combo& combo, std::ostream& os) {
  const DeviceParams p = device_for(cfg, combo);
  std::vector<Pulse> pulses = cfg.pulses;
  if (cfg.solve_amplitude) {
    pulses.front().amplitude = required_amplitude(p, cfg.task, pulses.front().t_start, pulses.front().t_end);
  }
  const PulseTrain train(pulses, cfg.task.t1);
  const SampledSignal drive = drive_signal(p, train, cfg.step);
  const SampledSignal current = current_signal(train, cfg.step);
  const Trajectory oracle = oracle_solve(drive, p.alpha, cfg.task.x0);
  const Trajectory closed = closed_form_trajectory(p, train, cfg.task.x0, drive.grid());

  const auto& g = drive.grid();
  const std::size_t n = g.size();
  const auto every = static_cast<std::size_t>(cfg.output_every);
  SimulationStats stats;
  CsvWriter csv(os, {"t", "x_closed_form", "x_oracle", "abs_error", "tolerance", "V_M", "I"});
  for (std::size_t k = 0; k < n; ++k) {
    const bool at_jump = (k > 0 && g[k] == g[k - 1]) || (k + 1 < n && g[k + 1] == g[k]);
    if (!(k % every == 0 || k + 1 == n || at_jump)) continue;
    const double x = closed.x[k];
    if (!(x >= 0.0)) {
      throw std::domain_error("simulate: state left x >= 0 at t = " + format_number(g[k]) + " (x = " +
                              format_number(x) + ")");
    }
    const double err = std::abs(x - oracle.x[k]);
    stats.max_abs_error = std::max(stats.max_abs_error, err);
    const double i = current.values()[k];
    csv.field(g[k]).field(x).field(oracle.x[k]).field(err).field(cfg.tolerance).field(voltage(p, x, i)).field(i);
    csv.end_row();
    ++stats.rows;
  }
  // Rows skipped by output_every still count towards the agreement check.
  stats.max_abs_error = std::max(stats.max_abs_error, closed.max_abs_difference(oracle));
  return stats;
}

void write_trajectory(const RunConfig& cfg, const DeviceParams& p, const OptimizationResult& r, std::ostream& os) {
  struct Row {
    double t;
    double current;
    bool marker;
  };
  const double t1 = cfg.task.t1;
  const auto n = static_cast<std::size_t>(cfg.trajectory_samples);
  std::vector<Row> rows;
  bool placed = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t1 * static_cast<double>(k) / static_cast<double>(n - 1);
    if (!placed && t >= r.t_s) {
      rows.push_back({r.t_s, r.i1, true});
      rows.push_back({r.t_s, r.i2, true});
      placed = true;
      if (t == r.t_s) continue;
    }
    rows.push_back({t, t < r.t_s ? r.i1 : r.i2, false});
  }
  CsvWriter csv(os, {"t", "x", "I", "switch"});
  for (const auto& row : rows) {
    const double x = two_pulse_x(p, r.i1, r.i2, r.t_s, t1, cfg.task.x0, row.t);
    csv.field(row.t).field(x).field(row.current).field(row.marker ? 1 : 0);
    csv.end_row();
  }
}

} // namespace

std::string tagged_path(const std::string& out, std::string_view tag) {
  const std::filesystem::path path(out);
  auto name = path.stem().string() + "_" + std::string(tag) + path.extension().string();
  return (path.parent_path() / name).string();
}

void cmd_simulate(const RunConfig& cfg, std::ostream& console) {
  const auto list = combos(cfg);
  if (list.size() > 1 && cfg.out.empty()) {
    throw ConfigError("", 0, "out", "several (alpha, beta) pairs need an output path");
  }
  std::string worst;
  for (const auto& combo : list) {
    const std::string path = list.size() > 1 ? tagged_path(cfg.out, combo.tag) : cfg.out;
    Output out(path, console);
    const auto stats = simulate_one(cfg, combo, out.stream());
    out.close();
    if (out.is_file()) {
      console << "wrote " << path << " rows=" << stats.rows << " max_abs_error=" << format_number(stats.max_abs_error)
              << '\n';
    }
    if (stats.max_abs_error > cfg.tolerance && worst.empty()) {
      worst = combo.tag + ": closed form and oracle differ by " + format_number(stats.max_abs_error) +
              " > tolerance " + format_number(cfg.tolerance);
    }
  }
  if (!worst.empty()) throw CheckFailed("simulate: " + worst);
}

void cmd_amplitude(const RunConfig& cfg, std::ostream& console) {
  DeviceParams p = cfg.device;
  const double i1 = required_amplitude(p, cfg.task, cfg.t_st, cfg.t_e);
  const double q = single_pulse_q(p, {cfg.t_st, cfg.t_e, i1}, cfg.task.x0);
  Output out(cfg.out, console);
  auto& os = out.stream();
  write_report_line(os, "alpha", format_number(p.alpha.value()));
  write_report_line(os, "beta", format_number(p.beta));
  write_report_line(os, "t_st", format_number(cfg.t_st));
  write_report_line(os, "t_e", format_number(cfg.t_e));
  write_report_line(os, "i1", format_number(i1));
  write_report_line(os, "q", format_number(q));
  out.close();
}

void cmd_energy_scan(const RunConfig& cfg, std::ostream& console) {
  const double t1 = cfg.task.t1;
  const auto widths = cfg.widths.values();
  Output out(cfg.out, console);
  CsvWriter csv(out.stream(), {"alpha", "beta", "T", "Q", "I1"});
  for (const auto& combo : combos(cfg)) {
    const DeviceParams p = device_for(cfg, combo);
    for (double width : widths) {
      const double t_st = std::max(0.0, t1 - std::min(width, t1));
      const double i1 = required_amplitude(p, cfg.task, t_st, t1);
      const double q = single_pulse_q(p, {t_st, t1, i1}, cfg.task.x0);
      csv.field(combo.alpha).field(combo.beta).field(t1 - t_st).field(q).field(i1);
      csv.end_row();
    }
  }
  out.close();
  if (out.is_file()) console << "wrote " << cfg.out << '\n';
}

void cmd_optimize(const RunConfig& cfg, std::ostream& console) {
  struct Outcome {
    OptimizationResult pair;
    OptimizationResult single;
    double q_single_wide = 0.0;
    double q_single_narrow = 0.0;
  };
  const auto list = combos(cfg);
  if (cfg.trajectories && cfg.out.empty()) {
    throw ConfigError("", 0, "trajectories", "needs an output path");
  }
  std::vector<Outcome> results(list.size());
  parallel_for(list.size(), cfg.jobs, [&](std::size_t i) {
    const DeviceParams p = device_for(cfg, list[i]);
    results[i].pair = optimize_double(p, cfg.task, cfg.optimizer);
    results[i].single = optimize_single(p, cfg.task, cfg.optimizer);
    results[i].q_single_wide = single_pulse_q_end_aligned(p, cfg.task, 0.0);
    results[i].q_single_narrow = narrow_single_pulse_q(p, cfg.task, cfg.optimizer);
  });

  std::size_t unconverged = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& r = results[i].pair;
    if (!r.converged) ++unconverged;
    if (!cfg.out.empty()) {
      console << "alpha=" << format_number(list[i].alpha) << " beta=" << format_number(list[i].beta)
              << " q=" << format_number(r.q) << " regime=" << to_string(r.regime)
              << " converged=" << (r.converged ? "true" : "false") << '\n';
      continue;
    }
    if (i > 0) console << '\n';
    write_report_line(console, "alpha", format_number(list[i].alpha));
    write_report_line(console, "beta", format_number(list[i].beta));
    write_report_line(console, "min_pulse_width", format_number(cfg.optimizer.min_pulse_width));
    write_report_line(console, "q", format_number(r.q));
    write_report_line(console, "i1", format_number(r.i1));
    write_report_line(console, "i2", format_number(r.i2));
    write_report_line(console, "t_s", format_number(r.t_s));
    write_report_line(console, "T1", format_number(r.t_s));
    write_report_line(console, "T2", format_number(r.t1 - r.t_s));
    write_report_line(console, "regime", std::string(to_string(r.regime)));
    write_report_line(console, "active_constraints", r.active.to_string());
    write_report_line(console, "converged", r.converged ? "true" : "false");
    write_report_line(console, "audit_q", format_number(r.audit_q));
    write_report_line(console, "evaluations", std::to_string(r.evaluations));
    write_report_line(console, "q_single_best", format_number(results[i].single.q));
    write_report_line(console, "q_single_wide", format_number(results[i].q_single_wide));
    write_report_line(console, "q_single_narrow", format_number(results[i].q_single_narrow));
  }

  if (!cfg.out.empty()) {
    Output out(cfg.out, console);
    CsvWriter csv(out.stream(), {"alpha", "beta", "min_pulse_width", "q", "i1", "i2", "t_s", "regime",
                                 "active_constraints", "converged", "audit_q", "q_single_best", "q_single_wide",
                                 "q_single_narrow"});
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& r = results[i].pair;
      csv.field(list[i].alpha).field(list[i].beta).field(cfg.optimizer.min_pulse_width).field(r.q).field(r.i1);
      csv.field(r.i2).field(r.t_s).field(to_string(r.regime)).field(r.active.to_string()).field(r.converged);
      csv.field(r.audit_q).field(results[i].single.q).field(results[i].q_single_wide);
      csv.field(results[i].q_single_narrow);
      csv.end_row();
    }
    out.close();
    console << "wrote " << cfg.out << '\n';
  }

  if (cfg.trajectories) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = tagged_path(cfg.out, "traj_" + list[i].tag);
      Output out(path, console);
      write_trajectory(cfg, device_for(cfg, list[i]), results[i].pair, out.stream());
      out.close();
      console << "wrote " << path << '\n';
    }
  }

  if (unconverged > 0) {
    throw CheckFailed("optimize: " + std::to_string(unconverged) + " of " + std::to_string(list.size()) +
                      " runs did not converge within tol/max_iters");
  }
}

void cmd_sweep(const RunConfig& cfg, std::ostream& console) {
  SweepSpec spec;
  spec.alpha = cfg.alpha_range;
  spec.beta = cfg.beta_range;
  spec.cfg = cfg.optimizer;
  spec.params = cfg.device;
  spec.task = cfg.task;
  spec.jobs = cfg.jobs;
  const PhaseDiagram diagram = run_sweep(spec);

  Output csv(cfg.out, console);
  write_phase_csv(csv.stream(), diagram);
  csv.close();
  if (csv.is_file()) console << "wrote " << cfg.out << '\n';

  Output summary(cfg.summary, console);
  write_boundary_summary(summary.stream(), diagram);
  summary.close();
  if (summary.is_file()) console << "wrote " << cfg.summary << '\n';
}

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names = {"simulate", "amplitude", "energy-scan", "optimize", "sweep"};
  return names;
}

void dispatch(std::string_view command, const RunConfig& cfg, std::ostream& console) {
  if (command == "simulate") return cmd_simulate(cfg, console);
  if (command == "amplitude") return cmd_amplitude(cfg, console);
  if (command == "energy-scan") return cmd_energy_scan(cfg, console);
  if (command == "optimize") return cmd_optimize(cfg, console);
  if (command == "sweep") return cmd_sweep(cfg, console);
  throw ConfigError("", 0, "command", "unknown command '" + std::string(command) + "'");
}

ErrorReport error_report(const std::exception& e) {
  std::string kind = "runtime";
  int code = 1;
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) {
    kind = "config";
    code = 2;
  } else if (dynamic_cast<const InfeasibleError*>(&e) != nullptr) {
    kind = "infeasible";
    code = 3;
  } else if (dynamic_cast<const std::domain_error*>(&e) != nullptr ||
             dynamic_cast<const std::invalid_argument*>(&e) != nullptr) {
    kind = "domain";
    code = 3;
  } else if (dynamic_cast<const CheckFailed*>(&e) != nullptr) {
    kind = "check";
    code = 4;
  }
  return {error_line(kind, code, e.what()), code};
}

std::string error_line(std::string_view kind, int exit_code, std::string_view message) {
  return "error kind=" + std::string(kind) + " exit=" + std::to_string(exit_code) + " message=" + quoted(message);
}

} // namespace fracmem::cli
