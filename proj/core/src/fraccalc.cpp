#include "fracmem/fraccalc.hpp"

#include "fracmem/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace fracmem {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("fractional order must satisfy 0 < alpha <= 1, got " + std::to_string(alpha));
  }
}

SampledSignal::SampledSignal(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) {
    throw std::invalid_argument("SampledSignal: grid and values differ in length");
  }
  if (grid_.size() < 2) {
    throw std::invalid_argument("SampledSignal: need at least two samples");
  }
  if (grid_.front() != 0.0) {
    throw std::invalid_argument("SampledSignal: grid must start at 0");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("SampledSignal: non-finite sample at index " + std::to_string(i));
    }
    if (i == 0) {
      continue;
    }
    if (grid_[i] < grid_[i - 1]) {
      throw std::invalid_argument("SampledSignal: grid decreases at index " + std::to_string(i));
    }
    if (i >= 2 && grid_[i] == grid_[i - 1] && grid_[i - 1] == grid_[i - 2]) {
      throw std::invalid_argument("SampledSignal: node repeated more than twice at index " + std::to_string(i));
    }
  }
  if (!(grid_.back() > 0.0)) {
    throw std::invalid_argument("SampledSignal: grid must span a positive interval");
  }
}

namespace {

std::vector<double> uniform_nodes(double horizon, double step) {
  if (!(horizon > 0.0) || !(step > 0.0) || step > horizon) {
    throw std::invalid_argument("SampledSignal: need 0 < step <= horizon");
  }
  const auto cells = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  std::vector<double> nodes(cells + 1);
  for (std::size_t k = 0; k < cells; ++k) {
    nodes[k] = static_cast<double>(k) * step;
  }
  nodes[cells] = horizon;
  return nodes;
}

} // namespace

SampledSignal SampledSignal::uniform(const std::function<double(double)>& f, double horizon, double step) {
  auto nodes = uniform_nodes(horizon, step);
  std::vector<double> values(nodes.size());
  std::transform(nodes.begin(), nodes.end(), values.begin(), f);
  return SampledSignal(std::move(nodes), std::move(values));
}

SampledSignal SampledSignal::piecewise_constant(std::span<const double> breaks, std::span<const double> levels,
                                                double horizon, double step) {
  if (levels.size() != breaks.size() + 1) {
    throw std::invalid_argument("SampledSignal::piecewise_constant: need one more level than break points");
  }
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    if (!(breaks[k] > 0.0 && breaks[k] < horizon) || (k > 0 && !(breaks[k] > breaks[k - 1]))) {
      throw std::invalid_argument("SampledSignal::piecewise_constant: break points must be increasing inside (0, horizon)");
    }
  }
  const auto base = uniform_nodes(horizon, step);
  const double snap = 1e-9 * step;

  std::vector<double> grid;
  std::vector<double> values;
  grid.reserve(base.size() + 2 * breaks.size());
  values.reserve(grid.capacity());

  std::size_t next_break = 0;
  auto level_at = [&](double t) {
    const auto seg = std::upper_bound(breaks.begin(), breaks.end(), t) - breaks.begin();
    return levels[static_cast<std::size_t>(seg)];
  };
  auto emit_jump = [&](double t, std::size_t k) {
    grid.push_back(t);
    values.push_back(levels[k]);
    grid.push_back(t);
    values.push_back(levels[k + 1]);
  };

  for (double node : base) {
    while (next_break < breaks.size() && breaks[next_break] < node - snap) {
      emit_jump(breaks[next_break], next_break);
      ++next_break;
    }
    if (next_break < breaks.size() && std::abs(breaks[next_break] - node) <= snap) {
      // Break coincides with a lattice node; the jump keeps the exact break time.
      emit_jump(breaks[next_break], next_break);
      ++next_break;
      continue;
    }
    grid.push_back(node);
    values.push_back(level_at(node));
  }
  return SampledSignal(std::move(grid), std::move(values));
}

double SampledSignal::at(double t) const {
  if (t < 0.0 || t > horizon()) {
    throw std::domain_error("SampledSignal::at: t outside the grid span");
  }
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  if (it == grid_.end()) {
    return values_.back();
  }
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  const std::size_t lo = hi - 1;
  const double len = grid_[hi] - grid_[lo];
  const double w = (t - grid_[lo]) / len;
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

namespace {

void check_span(const SampledSignal& f, double t, const char* who) {
  if (!(t >= 0.0 && t <= f.horizon())) {
    throw std::domain_error(std::string(who) + ": t = " + std::to_string(t) + " outside [0, " +
                            std::to_string(f.horizon()) + "]");
  }
}

// Kernel moments over a cell [a, b] seen from t >= b:
//   m0 = ∫ (t-τ)^(q-1) dτ,  m1 = ∫ (t-τ)^(q-1) (τ-a) dτ.
// pa = (t-a)^q and pb = (t-b)^q are passed in so callers can reuse them.
struct CellMoments {
  double m0;
  double m1;
};

CellMoments cell_moments(double order, double da, double db, double pa, double pb) {
  const double m0 = (pa - pb) / order;
  const double m1 = da * m0 - (da * pa - db * pb) / (order + 1.0);
  return {m0, m1};
}

struct Lattice {
  double step;
  std::vector<long long> index;
};

std::optional<Lattice> detect_lattice(const std::vector<double>& grid) {
  double min_gap = grid.back();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double gap = grid[i] - grid[i - 1];
    if (gap > 0.0) {
      min_gap = std::min(min_gap, gap);
    }
  }
  const long long cells = std::llround(grid.back() / min_gap);
  const double step = grid.back() / static_cast<double>(cells);
  Lattice lattice{step, std::vector<long long>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const long long k = std::llround(grid[i] / step);
    if (std::abs(grid[i] - static_cast<double>(k) * step) > 1e-7 * step) {
      return std::nullopt;
    }
    lattice.index[i] = k;
  }
  return lattice;
}

std::vector<double> rl_on_lattice(const SampledSignal& f, double order, const Lattice& lattice) {
  const auto& v = f.values();
  const std::size_t n = v.size();
  const auto& k = lattice.index;
  const double h = lattice.step;
  const auto span = static_cast<std::size_t>(k.back());

  // power[m] = (m h)^order; unit-cell weights indexed by the lattice distance
  // from the target to the cell's left node.
  std::vector<double> power(span + 1);
  for (std::size_t m = 0; m <= span; ++m) {
    power[m] = std::pow(static_cast<double>(m) * h, order);
  }
  std::vector<double> w_left(span + 1, 0.0);
  std::vector<double> w_right(span + 1, 0.0);
  for (std::size_t m = 1; m <= span; ++m) {
    const double da = static_cast<double>(m) * h;
    const double db = static_cast<double>(m - 1) * h;
    const auto mom = cell_moments(order, da, db, power[m], power[m - 1]);
    w_right[m] = mom.m1 / h;
    w_left[m] = mom.m0 - w_right[m];
  }

  const double scale = 1.0 / gamma(order);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const long long ki = k[i];
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 <= i; ++j) {
      const long long ka = k[j];
      const long long kb = k[j + 1];
      if (kb == ka) {
        continue;
      }
      const auto ma = static_cast<std::size_t>(ki - ka);
      if (kb == ka + 1) {
        sum += v[j] * w_left[ma] + v[j + 1] * w_right[ma];
      } else {
        const auto mb = static_cast<std::size_t>(ki - kb);
        const double len = static_cast<double>(kb - ka) * h;
        const auto mom = cell_moments(order, static_cast<double>(ma) * h, static_cast<double>(mb) * h,
                                      power[ma], power[mb]);
        sum += v[j] * (mom.m0 - mom.m1 / len) + v[j + 1] * (mom.m1 / len);
      }
    }
    out[i] = sum * scale;
  }
  return out;
}

} // namespace

double rl_integral(const SampledSignal& f, double order, double t) {
  if (!(order > 0.0) || !std::isfinite(order)) {
    throw std::domain_error("rl_integral: order must be positive");
  }
  check_span(f, t, "rl_integral");
  const auto& g = f.grid();
  const auto& v = f.values();

  double sum = 0.0;
  double da = t;
  double pa = std::pow(da, order);
  for (std::size_t j = 0; j + 1 < g.size() && g[j] < t; ++j) {
    const double a = g[j];
    double b = g[j + 1];
    if (b == a) {
      continue;
    }
    double fb = v[j + 1];
    if (b > t) {
      fb = v[j] + (t - a) / (b - a) * (v[j + 1] - v[j]);
      b = t;
    }
    const double len = b - a;
    const double db = t - b;
    const double pb = db > 0.0 ? std::pow(db, order) : 0.0;
    const auto mom = cell_moments(order, da, db, pa, pb);
    sum += v[j] * (mom.m0 - mom.m1 / len) + fb * (mom.m1 / len);
    da = db;
    pa = pb;
  }
  return sum / gamma(order);
}

double rl_integral(const SampledSignal& f, FractionalOrder alpha, double t) {
  return rl_integral(f, alpha.value(), t);
}

std::vector<double> rl_integral_on_grid(const SampledSignal& f, double order) {
  if (!(order > 0.0) || !std::isfinite(order)) {
    throw std::domain_error("rl_integral_on_grid: order must be positive");
  }
  if (auto lattice = detect_lattice(f.grid())) {
    return rl_on_lattice(f, order, *lattice);
  }
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = rl_integral(f, order, f.grid()[i]);
  }
  return out;
}

double caputo_derivative(const SampledSignal& f, FractionalOrder alpha, double t) {
  if (alpha.is_integer()) {
    throw std::domain_error("caputo_derivative: alpha = 1 is the ordinary derivative; use a difference quotient");
  }
  if (!(t > 0.0)) {
    throw std::domain_error("caputo_derivative: t must be positive");
  }
  check_span(f, t, "caputo_derivative");
  const double a1 = 1.0 - alpha.value();
  const auto& g = f.grid();
  const auto& v = f.values();

  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < g.size() && g[j] < t; ++j) {
    const double a = g[j];
    double b = g[j + 1];
    if (b == a) {
      sum += (v[j + 1] - v[j]) * std::pow(t - a, -alpha.value());
      continue;
    }
    double fb = v[j + 1];
    if (b > t) {
      fb = v[j] + (t - a) / (b - a) * (v[j + 1] - v[j]);
      b = t;
    }
    const double slope = (fb - v[j]) / (b - a);
    sum += slope * (std::pow(t - a, a1) - std::pow(t - b, a1)) / a1;
  }
  return sum / gamma(a1);
}

Trajectory oracle_solve(const SampledSignal& drive, FractionalOrder alpha, double x0) {
  Trajectory out;
  out.grid = drive.grid();
  out.x = rl_integral_on_grid(drive, alpha.value());
  for (double& xi : out.x) {
    xi += x0;
  }
  out.source = TrajectorySource::Oracle;
  return out;
}

} // namespace fracmem
