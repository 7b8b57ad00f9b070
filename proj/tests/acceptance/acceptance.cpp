// Acceptance checks. Usage: fracmem_acceptance [criterion ...]
// Prints one PASS/FAIL line per criterion; exit status is the number of failures.
#include "fracmem/analytics.hpp"
#include "fracmem/fraccalc.hpp"
#include "fracmem/optimizer.hpp"
#include "fracmem/sweep.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fracmem;
using fracmem::testing::q_quadrature;
using fracmem::testing::rel_diff;

namespace {

// Pinned tolerances.
constexpr double kTrajectoryTol = 1e-6;
constexpr double kEnergyRelTol = 1e-6;
constexpr double kOracleStep = 1e-4;
constexpr double kFlatSpreadTol = 1e-10;
constexpr double kFlatValueTol = 1e-9;
constexpr double kNarrowLossBound = 1e-3;
constexpr double kFirstTransition = 0.5, kFirstTransitionTol = 0.02;
constexpr double kSecondTransition = 0.85, kSecondTransitionTol = 0.03;
constexpr double kSlope = 7.05, kSlopeTol = 0.7;
constexpr double kIntercept = -5.08, kInterceptTol = 0.5;
constexpr double kIdentityRelTol = 1e-12;
constexpr double kRoundTripTol = 1e-4;
constexpr double kAuditSlack = 1e-9;
constexpr double kTargetTol = 1e-9;
constexpr double kLimit1 = 10.0, kLimit4 = 300.0, kLimit5 = 1800.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failed += failed.empty() ? what : "; " + what;
    }
  }
};

DeviceParams with(double alpha, double beta) {
  DeviceParams p;
  p.alpha = FractionalOrder(alpha);
  p.beta = beta;
  return p;
}

OptimizerConfig width(double w) {
  OptimizerConfig cfg;
  cfg.min_pulse_width = w;
  return cfg;
}

const SwitchingTask kTask{};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Closed forms against the quadrature oracle on random pulse trains.
void closed_form_vs_oracle(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_x = 0.0;
  double worst_q = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto p = with(0.05 + 0.95 * u(rng), 0.2 + 2.8 * u(rng));
    const PulseTrain train = fracmem::testing::random_train(rng, 1.0, kOracleStep, 3);
    const auto drive = drive_signal(p, train, kOracleStep);
    const auto oracle = oracle_solve(drive, p.alpha, 0.0);
    const auto closed = closed_form_trajectory(p, train, 0.0, drive.grid());
    worst_x = std::max(worst_x, oracle.max_abs_difference(closed));
    worst_q = std::max(worst_q, rel_diff(pulse_train_q(p, train, 0.0), q_quadrature(p, train, 0.0, kOracleStep)));
  }
  const double elapsed = seconds_since(start);
  out.detail << "20 cases, max|dx| = " << worst_x << ", max rel dQ = " << worst_q << ", " << elapsed << " s";
  out.require(worst_x <= kTrajectoryTol, "trajectory tolerance");
  out.require(worst_q <= kEnergyRelTol, "energy tolerance");
  out.require(elapsed < kLimit1, "runtime");
}

std::vector<double> widths() {
  std::vector<double> t;
  for (int k = 1; k <= 20; ++k) t.push_back(0.05 * k);
  return t;
}

// 2. Losses independent of the pulse width at alpha = beta/2.
void flat_losses(Outcome& out) {
  const auto p = with(0.5, 1.0);
  const double expected = M_PI / 4.0 * 13.0 / 3.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double worst = 0.0;
  for (double t : widths()) {
    const double t_st = std::max(0.0, 1.0 - t);
    for (double q : {single_pulse_q_end_aligned(p, kTask, t_st),
                     single_pulse_q(p, {t_st, 1.0, required_amplitude(p, kTask, t_st, 1.0)}, 0.0)}) {
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      worst = std::max(worst, std::abs(q - expected));
    }
  }
  const double spread = (hi - lo) / lo;
  out.detail << "relative spread " << spread << ", max |Q - 13pi/12| = " << worst;
  out.require(spread < kFlatSpreadTol, "spread");
  out.require(worst <= kFlatValueTol, "value");
}

// 3. Monotonicity in the pulse width on either side of alpha = beta/2.
void width_monotonicity(Outcome& out) {
  auto direction = [](double alpha, double beta) {
    const auto p = with(alpha, beta);
    bool up = true;
    bool down = true;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (double t : widths()) {
      const double q = single_pulse_q_end_aligned(p, kTask, std::max(0.0, 1.0 - t));
      if (!std::isnan(prev)) {
        up = up && q > prev;
        down = down && q < prev;
      }
      prev = q;
    }
    return up ? 1 : down ? -1 : 0;
  };
  out.require(direction(0.75, 1.0) == -1, "alpha=0.75 beta=1 decreasing");
  out.require(direction(0.25, 1.0) == 1, "alpha=0.25 beta=1 increasing");
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    out.require(direction(a, 2.0) == 1, "beta=2 alpha=" + std::to_string(a) + " increasing");
  }
  const double narrow = single_pulse_q_end_aligned(with(0.25, 1.0), kTask, 1.0 - 1e-8);
  out.detail << "Q(T=1e-8; alpha=0.25, beta=1) = " << narrow;
  out.require(narrow < kNarrowLossBound, "vanishing losses");
}

struct Transitions {
  double first = std::numeric_limits<double>::quiet_NaN();
  double second = std::numeric_limits<double>::quiet_NaN();
};

// Midpoints of the I->II and II->III label changes along an alpha list.
Transitions transitions(const std::vector<double>& alphas, const std::vector<Regime>& labels) {
  Transitions t;
  for (std::size_t k = 1; k < alphas.size(); ++k) {
    if (labels[k - 1] == Regime::I && labels[k] != Regime::I) t.first = 0.5 * (alphas[k - 1] + alphas[k]);
    if (labels[k - 1] == Regime::II && labels[k] == Regime::III && std::isnan(t.second)) {
      t.second = 0.5 * (alphas[k - 1] + alphas[k]);
    }
  }
  return t;
}

// 4. Regime transitions at beta = 1.
void regime_transitions(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> alphas;
  std::vector<Regime> labels;
  std::string trail;
  for (int k = 0; k < 37; ++k) {
    const double a = 0.1 + 0.025 * k;
    const auto r = optimize_double(with(a, 1.0), kTask, width(1e-6));
    alphas.push_back(a);
    labels.push_back(r.regime);
    out.require(r.converged, "converged at alpha=" + std::to_string(a));
  }
  const auto t = transitions(alphas, labels);
  const double elapsed = seconds_since(start);
  out.detail << "I->II at " << t.first << ", II->III at " << t.second << ", " << elapsed << " s";
  out.require(std::abs(t.first - kFirstTransition) <= kFirstTransitionTol, "I->II location");
  out.require(std::abs(t.second - kSecondTransition) <= kSecondTransitionTol, "II->III location");
  out.require(elapsed < kLimit4, "runtime");
}

// 5. Default phase diagram.
void phase_diagram(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  SweepSpec spec;
  spec.jobs = 8;
  const PhaseDiagram d = run_sweep(spec);
  const double elapsed = seconds_since(start);
  const double step = spec.alpha.step;

  const auto line = fit_boundary_ii_iii(d);
  out.detail << "II/III: beta = " << line.slope << " alpha " << line.intercept << " (" << line.points
             << " rows); ";
  out.require(std::abs(line.slope - kSlope) <= kSlopeTol, "II/III slope");
  out.require(std::abs(line.intercept - kIntercept) <= kInterceptTol, "II/III intercept");

  std::map<double, double> first;  // beta -> I->II transition alpha
  for (const auto& pt : locate_boundary_i_ii(d)) first[pt.beta] = pt.alpha;
  int rows = 0;
  int off = 0;
  std::ostringstream offenders;
  for (std::size_t b = 0; b < d.betas.size(); ++b) {
    const double beta = d.betas[b];
    if (beta > 2.0) {
      for (std::size_t a = 0; a < d.alphas.size(); ++a) {
        if (d.at(b, a).failed || d.at(b, a).result.regime != Regime::I) {
          out.require(false, "beta=" + std::to_string(beta) + " row not all regime I");
          break;
        }
      }
      continue;
    }
    ++rows;
    const auto it = first.find(beta);
    const bool ok = it != first.end() && std::abs(it->second - 0.5 * beta) <= step + 1e-12;
    if (!ok) {
      ++off;
      offenders << " beta=" << beta << ":" << (it == first.end() ? std::nan("") : it->second - 0.5 * beta);
    }
  }
  out.detail << "I/II within one step in " << rows - off << "/" << rows << " rows";
  if (off > 0) out.detail << " (offset from beta/2:" << offenders.str() << ")";
  out.require(off == 0, "I/II rows within one grid step of beta = 2 alpha");
  out.detail << "; " << d.failed_count() << " failed cells; " << elapsed << " s";
  out.require(elapsed < kLimit5, "runtime");
}

// 6. Optimal losses non-decreasing in alpha.
void alpha_monotonicity(Outcome& out) {
  for (double w : {1e-6, 1e-2}) {
    double prev = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double q = optimize_double(with(0.1 * k, 1.0), kTask, width(w)).q;
      out.require(q >= prev, "w=" + std::to_string(w) + " alpha=" + std::to_string(0.1 * k));
      prev = q;
    }
    out.detail << "w=" << w << ": Q(1.0) = " << prev << "  ";
  }
}

// 7. Algebraic identities.
void identities(Outcome& out) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_ts0 = 0.0;
  double worst_i1zero = 0.0;
  double worst_beta = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto p = with(0.02 + 0.98 * u(rng), 0.1 + 2.9 * u(rng));
    const double i1 = 10.0 * u(rng);
    worst_ts0 = std::max(worst_ts0, rel_diff(two_pulse_q_compact(p, kTask, i1, 0.0),
                                             single_pulse_q_end_aligned(p, kTask, 0.0)));
    const double t_s = 0.99 * u(rng);
    worst_i1zero = std::max(worst_i1zero, rel_diff(second_pulse_amplitude(p, kTask, 0.0, t_s),
                                                   required_amplitude(p, kTask, t_s, 1.0)));
    const double t_st = 0.6 * u(rng);
    const double t_e = t_st + 0.05 + (0.95 - t_st) * u(rng);
    for (double t = 0.0; t <= 1.0; t += 0.02) {
      auto x_for = [&](double beta) {
        auto q = p;
        q.beta = beta;
        return single_pulse_x(q, {t_st, t_e, required_amplitude(q, kTask, t_st, t_e)}, 0.0, t);
      };
      worst_beta = std::max({worst_beta, std::abs(x_for(0.5) - x_for(1.0)), std::abs(x_for(2.0) - x_for(1.0))});
    }
  }
  double worst_ft = 0.0;
  auto f = [](double t) { return std::sin(2.0 * t) + 0.5 * t * t + 1.0; };
  const auto s = SampledSignal::uniform(f, 1.0, 2.5e-4);
  for (double a : {0.25, 0.5, 0.75}) {
    const FractionalOrder alpha(a);
    std::vector<double> d(s.size(), 0.0);
    for (std::size_t k = 1; k < s.size(); ++k) d[k] = caputo_derivative(s, alpha, s.grid()[k]);
    const SampledSignal deriv(s.grid(), d);
    for (double t : {0.3, 0.7, 1.0}) worst_ft = std::max(worst_ft, std::abs(rl_integral(deriv, alpha, t) - (f(t) - f(0.0))));
  }
  out.detail << "t_s=0: " << worst_ts0 << ", I1=0: " << worst_i1zero << ", beta-indep: " << worst_beta
             << ", J(D f) round trip: " << worst_ft;
  out.require(worst_ts0 <= kIdentityRelTol, "two-pulse losses at t_s = 0");
  out.require(worst_i1zero <= kIdentityRelTol, "second amplitude at I1 = 0");
  out.require(worst_beta <= kIdentityRelTol, "beta independence");
  out.require(worst_ft <= kRoundTripTol, "fundamental theorem");
}

// 8. Optimizer against an independent dense grid.
void optimizer_audit(Outcome& out) {
  const std::pair<double, double> panel[] = {{0.3, 1.0}, {0.5, 1.0},  {0.6, 1.0}, {0.75, 1.0}, {0.9, 1.0},
                                             {1.0, 1.0}, {0.4, 0.5},  {0.8, 1.5}, {0.95, 2.0}, {0.7, 2.5}};
  const auto cfg = width(1e-6);
  const double w = cfg.min_pulse_width;
  double worst_gap = -std::numeric_limits<double>::infinity();
  double worst_target = 0.0;
  for (const auto& [alpha, beta] : panel) {
    const auto p = with(alpha, beta);
    const auto r = optimize_double(p, kTask, cfg);
    double grid = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 64; ++i) {
      const double t_s = w + (1.0 - 2.0 * w) * i / 63.0;
      const double cap = first_pulse_amplitude_limit(p, kTask, t_s);
      for (int j = 0; j < 64; ++j) grid = std::min(grid, two_pulse_q(p, kTask, cap * j / 63.0, t_s));
    }
    worst_gap = std::max(worst_gap, r.q - grid);
    worst_target = std::max(worst_target, std::abs(two_pulse_x(p, r.i1, r.i2, r.t_s, 1.0, 0.0, 1.0) - 1.0));
    out.require(r.q <= grid + kAuditSlack, "audit at alpha=" + std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
  out.detail << "max(Q - grid min) = " << worst_gap << ", max|x(t1) - 1| = " << worst_target;
  out.require(worst_target <= kTargetTol, "terminal constraint");
}

struct Criterion {
  const char* name;
  std::function<void(Outcome&)> run;
};

} // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"closed form vs oracle", closed_form_vs_oracle},
      {"flat losses at alpha = beta/2", flat_losses},
      {"width monotonicity split at alpha = beta/2", width_monotonicity},
      {"regime transitions at beta = 1", regime_transitions},
      {"phase-diagram boundaries", phase_diagram},
      {"optimal losses non-decreasing in alpha", alpha_monotonicity},
      {"algebraic identities", identities},
      {"optimizer audit", optimizer_audit},
  };
  std::vector<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.push_back(std::atoi(argv[i]));
  if (chosen.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) chosen.push_back(i);
  }
  int failures = 0;
  for (int id : chosen) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::printf("criterion %d: FAIL unknown criterion\n", id);
      ++failures;
      continue;
    }
    Outcome out;
    try {
      criteria[id - 1].run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    failures += out.pass ? 0 : 1;
    std::string line = out.detail.str();
    if (!out.failed.empty()) line += " [failed: " + out.failed + "]";
    std::printf("criterion %d: %s %s: %s\n", id, out.pass ? "PASS" : "FAIL", criteria[id - 1].name, line.c_str());
    std::fflush(stdout);
  }
  return failures;
}
