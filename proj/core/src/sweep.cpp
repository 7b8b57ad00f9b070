#include "fracmem/sweep.hpp"

#include "fracmem/csv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace fracmem {

std::vector<double> AxisRange::values() const {
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    // Snap to 1e-12 so that e.g. 0.05 + 9 * 0.05 prints and compares as 0.5.
    out[k] = std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12;
  }
  return out;
}

void SweepSpec::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(alpha.step > 0.0)) fail("alpha_step: must be positive");
  if (!(beta.step > 0.0)) fail("beta_step: must be positive");
  if (!(alpha.lo >= 0.01)) fail("alpha_lo: must be >= 0.01, got " + std::to_string(alpha.lo));
  if (!(alpha.hi <= 1.0)) fail("alpha_hi: must be <= 1, got " + std::to_string(alpha.hi));
  if (!(alpha.lo < alpha.hi)) fail("alpha_lo: must be below alpha_hi");
  if (!(beta.lo >= 0.05)) fail("beta_lo: must be >= 0.05, got " + std::to_string(beta.lo));
  if (!(beta.lo < beta.hi)) fail("beta_lo: must be below beta_hi");
  if (jobs < 1) fail("jobs: must be >= 1");
  params.validate();
  task.validate();
  cfg.validate(task.t1);
}

std::size_t PhaseDiagram::failed_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const PhaseCell& c) {
    return c.failed || !c.result.converged;
  }));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

PhaseCell solve_cell(const SweepSpec& spec, double alpha, double beta, std::size_t index) {
  PhaseCell cell;
  cell.alpha = alpha;
  cell.beta = beta;
  try {
    DeviceParams p = spec.params;
    p.alpha = FractionalOrder(alpha);
    p.beta = beta;
    OptimizerConfig cfg = spec.cfg;
    cfg.seed = splitmix64(spec.cfg.seed ^ splitmix64(index));
    cell.result = optimize_double(p, spec.task, cfg);
  } catch (const std::exception&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    cell.failed = true;
    cell.result.i1 = cell.result.i2 = cell.result.t_s = cell.result.q = nan;
    cell.result.converged = false;
  }
  return cell;
}

bool usable(const PhaseCell& c) { return !c.failed && c.result.converged; }

} // namespace

PhaseDiagram run_sweep(const SweepSpec& spec) {
  spec.validate();
  PhaseDiagram diagram;
  diagram.alphas = spec.alpha.values();
  diagram.betas = spec.beta.values();
  const std::size_t n_alpha = diagram.alphas.size();
  const std::size_t total = n_alpha * diagram.betas.size();
  diagram.cells.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      diagram.cells[idx] = solve_cell(spec, diagram.alphas[idx % n_alpha], diagram.betas[idx / n_alpha], idx);
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), total));
  std::vector<std::jthread> pool;
  pool.reserve(workers > 0 ? workers - 1 : 0);
  for (std::size_t i = 1; i < workers; ++i) {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();

  if (20 * diagram.failed_count() > total) {
    throw std::runtime_error("run_sweep: " + std::to_string(diagram.failed_count()) + " of " +
                             std::to_string(total) + " cells failed (limit 5%)");
  }
  return diagram;
}

std::vector<BoundaryPoint> locate_boundary_i_ii(const PhaseDiagram& diagram) {
  std::vector<BoundaryPoint> points;
  for (std::size_t b = 0; b < diagram.betas.size(); ++b) {
    std::optional<std::size_t> last_i;
    for (std::size_t a = 0; a < diagram.alphas.size(); ++a) {
      const auto& c = diagram.at(b, a);
      if (usable(c) && c.result.regime == Regime::I) {
        last_i = a;
      }
    }
    if (!last_i) {
      continue;
    }
    for (std::size_t a = *last_i + 1; a < diagram.alphas.size(); ++a) {
      if (usable(diagram.at(b, a))) {
        points.push_back({diagram.betas[b], 0.5 * (diagram.alphas[*last_i] + diagram.alphas[a])});
        break;
      }
    }
  }
  if (points.empty()) {
    throw std::runtime_error("locate_boundary_i_ii: no regime I -> II transition in any row");
  }
  return points;
}

std::vector<BoundaryPoint> boundary_ii_iii_points(const PhaseDiagram& diagram) {
  std::vector<BoundaryPoint> points;
  for (std::size_t b = 0; b < diagram.betas.size(); ++b) {
    std::optional<std::size_t> last_ii;
    for (std::size_t a = 0; a < diagram.alphas.size(); ++a) {
      const auto& c = diagram.at(b, a);
      if (usable(c) && c.result.regime == Regime::II) {
        last_ii = a;
      }
    }
    if (!last_ii) {
      continue;
    }
    for (std::size_t a = *last_ii + 1; a < diagram.alphas.size(); ++a) {
      const auto& c = diagram.at(b, a);
      if (usable(c) && c.result.regime == Regime::III) {
        points.push_back({diagram.betas[b], 0.5 * (diagram.alphas[*last_ii] + diagram.alphas[a])});
        break;
      }
    }
  }
  return points;
}

BoundaryLine fit_boundary_ii_iii(const PhaseDiagram& diagram) {
  const auto points = boundary_ii_iii_points(diagram);
  if (points.size() < 3) {
    throw std::runtime_error("fit_boundary_ii_iii: need at least 3 transition points, found " +
                             std::to_string(points.size()));
  }
  const auto n = static_cast<double>(points.size());
  double mean_b = 0.0;
  double mean_a = 0.0;
  for (const auto& pt : points) {
    mean_b += pt.beta / n;
    mean_a += pt.alpha / n;
  }
  double sbb = 0.0;
  double sba = 0.0;
  for (const auto& pt : points) {
    sbb += (pt.beta - mean_b) * (pt.beta - mean_b);
    sba += (pt.beta - mean_b) * (pt.alpha - mean_a);
  }
  if (sbb == 0.0 || sba == 0.0) {
    throw std::runtime_error("fit_boundary_ii_iii: degenerate transition points");
  }
  // alpha = a*beta + c  <=>  beta = alpha/a - c/a
  const double a = sba / sbb;
  const double c = mean_a - a * mean_b;
  double sq = 0.0;
  for (const auto& pt : points) {
    const double r = pt.alpha - (a * pt.beta + c);
    sq += r * r;
  }
  return {1.0 / a, -c / a, std::sqrt(sq / n), points.size()};
}

void write_phase_csv(std::ostream& out, const PhaseDiagram& diagram) {
  CsvWriter csv(out, {"alpha", "beta", "regime", "q", "i1", "i2", "t_s", "converged"});
  for (const auto& c : diagram.cells) {
    csv.field(c.alpha).field(c.beta);
    csv.field(c.failed ? std::string_view("failed") : to_string(c.result.regime));
    csv.field(c.result.q).field(c.result.i1).field(c.result.i2).field(c.result.t_s);
    csv.field(!c.failed && c.result.converged);
    csv.end_row();
  }
}

void write_boundary_summary(std::ostream& out, const PhaseDiagram& diagram) {
  out << "cells.total = " << diagram.cells.size() << '\n';
  out << "cells.failed = " << diagram.failed_count() << '\n';
  out << "boundary_i_ii.model = beta = 2*alpha\n";
  try {
    const auto pts = locate_boundary_i_ii(diagram);
    double worst = 0.0;
    for (const auto& pt : pts) {
      worst = std::max(worst, std::abs(pt.alpha - 0.5 * pt.beta));
    }
    out << "boundary_i_ii.rows = " << pts.size() << '\n';
    out << "boundary_i_ii.max_deviation = " << format_number(worst) << '\n';
  } catch (const std::exception& e) {
    out << "boundary_i_ii.error = " << e.what() << '\n';
  }
  try {
    const auto line = fit_boundary_ii_iii(diagram);
    out << "boundary_ii_iii.slope = " << format_number(line.slope) << '\n';
    out << "boundary_ii_iii.intercept = " << format_number(line.intercept) << '\n';
    out << "boundary_ii_iii.residual = " << format_number(line.residual) << '\n';
    out << "boundary_ii_iii.points = " << line.points << '\n';
    out << "boundary_ii_iii.alpha_at_beta0 = " << format_number(-line.intercept / line.slope) << '\n';
  } catch (const std::exception& e) {
    out << "boundary_ii_iii.error = " << e.what() << '\n';
  }
}

} // namespace fracmem
