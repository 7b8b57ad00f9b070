#include "fracmem/analytics.hpp"
#include "fracmem/gamma.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

using namespace fracmem;
using fracmem::testing::q_quadrature;
using fracmem::testing::rel_diff;

namespace {

DeviceParams with(double alpha, double beta) {
  DeviceParams p;
  p.alpha = FractionalOrder(alpha);
  p.beta = beta;
  return p;
}

// Values from tests/oracles/derived_values.py (mpmath, 40 digits).
constexpr double kAmplitudeHalf = 5.343878950421673457;   // α = 0.5, β = 1, pulse [0.3, 0.55]
constexpr double kAmplitudeHalfB2 = 2.311683142305985121; // same, β = 2
constexpr double kSecondHalf = 0.8391005749424052024;     // α = 0.5, I1 = 1, t_s = 0.5
constexpr double kQFlat = 3.403392041388942675;           // (π/4)(13/3)

const SwitchingTask kTask{};

} // namespace

TEST_SUITE("analytics") {
  TEST_CASE("Pulse and PulseTrain invariants") {
    CHECK_NOTHROW(PulseTrain({{0.1, 0.2, 1.0}, {0.2, 0.5, 2.0}}, 1.0));
    CHECK_THROWS_AS(PulseTrain({{0.1, 0.3, 1.0}, {0.2, 0.5, 2.0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseTrain({{0.5, 1.2, 1.0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseTrain({{-0.1, 0.2, 1.0}}, 1.0), std::invalid_argument);
    try {
      PulseTrain({{0.3, 0.3, 1.0}}, 1.0);
      FAIL("accepted an empty pulse");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("empty pulse") != std::string::npos);
    }
    const PulseTrain train({{0.1, 0.2, 1.5}, {0.5, 1.0, -2.0}}, 1.0);
    CHECK(train.current_at(0.05) == 0.0);
    CHECK(train.current_at(0.1) == 1.5);
    CHECK(train.current_at(0.2) == 0.0);
    CHECK(train.current_at(0.7) == -2.0);
    CHECK(train.current_at(1.0) == -2.0);
  }

  TEST_CASE("single_pulse_x reference values") {
    const Pulse pulse{0.3, 0.55, 1.0};
    CHECK(single_pulse_x(with(1.0, 1.0), pulse, 0.0, 0.55) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(single_pulse_x(with(0.5, 1.0), pulse, 0.0, 0.55) == doctest::Approx(0.5641895835477563).epsilon(1e-13));
    CHECK(single_pulse_x(with(0.5, 1.0), pulse, 0.2, 0.1) == 0.2);
    CHECK_THROWS_AS(single_pulse_x(with(0.5, 1.0), pulse, 0.0, -0.1), std::domain_error);
  }

  TEST_CASE("relaxation after the pulse") {
    const Pulse pulse{0.3, 0.55, 1.0};
    for (double a : {0.2, 0.5, 0.8}) {
      const auto p = with(a, 1.0);
      double prev = single_pulse_x(p, pulse, 0.1, 0.55);
      for (double t = 0.6; t < 50.0; t *= 1.3) {
        const double x = single_pulse_x(p, pulse, 0.1, t);
        CHECK(x < prev);
        CHECK(x > 0.1);
        prev = x;
      }
      CHECK(single_pulse_x(p, pulse, 0.1, 1e9) - 0.1 < 1e-2);
    }
    const auto p1 = with(1.0, 1.0);
    CHECK(single_pulse_x(p1, pulse, 0.0, 5.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(single_pulse_x(p1, pulse, 0.0, 0.9) == doctest::Approx(0.25).epsilon(1e-14));
  }

  TEST_CASE("required_amplitude reference values") {
    CHECK(required_amplitude(with(1.0, 1.0), kTask, 0.3, 0.55) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(required_amplitude(with(0.5, 1.0), kTask, 0.3, 0.55) == doctest::Approx(kAmplitudeHalf).epsilon(1e-13));
    CHECK(required_amplitude(with(0.5, 2.0), kTask, 0.3, 0.55) == doctest::Approx(kAmplitudeHalfB2).epsilon(1e-13));
    // Published to five decimals.
    CHECK(rel_diff(required_amplitude(with(0.5, 1.0), kTask, 0.3, 0.55), 5.34389) < 1e-5);
  }

  TEST_CASE("required_amplitude agrees with bisection on x(t1) = x1") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      const auto p = with(0.05 + 0.95 * u(rng), 0.2 + 2.8 * u(rng));
      const double t_st = 0.8 * u(rng);
      const double t_e = t_st + (1.0 - t_st) * (0.1 + 0.9 * u(rng));
      double lo = 0.0, hi = 1.0;
      while (single_pulse_x(p, {t_st, t_e, hi}, 0.0, 1.0) < 1.0) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (single_pulse_x(p, {t_st, t_e, mid}, 0.0, 1.0) < 1.0 ? lo : hi) = mid;
      }
      CHECK(rel_diff(required_amplitude(p, kTask, t_st, t_e), 0.5 * (lo + hi)) < 1e-12);
    }
  }

  TEST_CASE("required_amplitude preconditions") {
    try {
      required_amplitude(with(0.5, 1.0), kTask, 0.3, 0.3);
      FAIL("accepted an empty pulse");
    } catch (const std::domain_error& e) {
      CHECK(std::string(e.what()).find("empty pulse") != std::string::npos);
    }
    CHECK_THROWS_AS(required_amplitude(with(0.5, 1.0), kTask, 0.3, 1.2), std::domain_error);
    CHECK_THROWS_AS(required_amplitude(with(0.5, 1.0), SwitchingTask{1.0, 0.5, 1.0}, 0.3, 0.5), std::domain_error);
  }

  TEST_CASE("normalized_trajectory") {
    for (double a : {0.1, 0.5, 0.9, 1.0}) {
      CHECK(normalized_trajectory(FractionalOrder(a), kTask, 0.3, 0.55, 1.0) == 1.0);
    }
    CHECK(normalized_trajectory(FractionalOrder(1.0), kTask, 0.3, 0.55, 0.8) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normalized_trajectory(FractionalOrder(1.0), kTask, 0.3, 0.55, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double ref = 0.6010687625587867451;
    CHECK(normalized_trajectory(FractionalOrder(0.5), kTask, 0.3, 0.55, 2.0) == doctest::Approx(ref).epsilon(1e-13));
    const auto p = with(0.5, 1.0);
    const double i1 = required_amplitude(p, kTask, 0.3, 0.55);
    CHECK(single_pulse_x(p, {0.3, 0.55, i1}, 0.0, 2.0) == doctest::Approx(ref).epsilon(1e-13));
    CHECK_THROWS_AS(normalized_trajectory(FractionalOrder(0.5), kTask, 0.3, 0.55, 0.5), std::domain_error);
  }

  TEST_CASE("constrained trajectories do not depend on beta") {
    for (double a : {0.3, 0.6, 1.0}) {
      const Pulse window{0.2, 0.7, 0.0};
      for (double t = 0.0; t <= 1.0; t += 0.01) {
        double x[3];
        int j = 0;
        for (double b : {0.5, 1.0, 2.0}) {
          const auto p = with(a, b);
          const double i1 = required_amplitude(p, kTask, window.t_start, window.t_end);
          x[j++] = single_pulse_x(p, {window.t_start, window.t_end, i1}, 0.0, t);
        }
        CHECK(std::abs(x[0] - x[1]) <= 1e-12);
        CHECK(std::abs(x[2] - x[1]) <= 1e-12);
      }
    }
  }

  TEST_CASE("single_pulse_q reference values") {
    CHECK(single_pulse_q(with(1.0, 1.0), {0.0, 1.0, 1.0}, 0.0) == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(single_pulse_q(with(0.5, 1.0), {0.3, 0.55, 0.0}, 0.0) == 0.0);
    const auto p = with(0.5, 1.0);
    const Pulse pulse{0.3, 0.55, kAmplitudeHalf};
    const double q = single_pulse_q(p, pulse, 0.0);
    CHECK(q == doctest::Approx(78.88789725729080689).epsilon(1e-12));
    CHECK(rel_diff(q, q_quadrature(p, PulseTrain({pulse}, 1.0), 0.0, 1e-4)) <= 1e-6);
  }

  TEST_CASE("end-aligned losses") {
    for (double t_st : {0.0, 0.2, 0.5, 0.9, 0.999}) {
      CHECK(single_pulse_q_end_aligned(with(0.5, 1.0), kTask, t_st) == doctest::Approx(kQFlat).epsilon(1e-13));
    }
    CHECK(single_pulse_q_end_aligned(with(1.0, 1.0), kTask, 0.0) == doctest::Approx(3.5).epsilon(1e-14));
    const auto p = with(0.25, 1.0);
    const double q_ref = single_pulse_q_end_aligned(p, kTask, 0.0);
    for (double width : {0.5, 0.1, 1e-4, 1e-8}) {
      CHECK(single_pulse_q_end_aligned(p, kTask, 1.0 - width) == doctest::Approx(q_ref * std::sqrt(width)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(single_pulse_q_end_aligned(p, kTask, 1.0), std::domain_error);
  }

  TEST_CASE("consistency: Q of the required pulse equals the end-aligned form") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      auto p = with(0.02 + 0.98 * u(rng), 0.1 + 2.9 * u(rng));
      p.A = 0.5 + 2.0 * u(rng);
      p.B = 0.5 + 8.0 * u(rng);
      p.kappa = 0.3 + 2.0 * u(rng);
      const SwitchingTask task{0.3 * u(rng), 1.0 + u(rng), 0.5 + u(rng)};
      const double t_st = task.t1 * 0.95 * u(rng);
      const double i1 = required_amplitude(p, task, t_st, task.t1);
      CHECK(rel_diff(single_pulse_q(p, {t_st, task.t1, i1}, task.x0), single_pulse_q_end_aligned(p, task, t_st)) <=
            1e-12);
    }
  }

  TEST_CASE("sign of the width exponent decides monotonicity in T") {
    struct Case {
      double alpha, beta;
      int sign;
    };
    for (auto c : {Case{0.75, 1.0, -1}, Case{0.25, 1.0, +1}, Case{0.5, 1.0, 0}, Case{0.9, 2.0, +1}, Case{1.0, 2.0, 0},
                   Case{0.6, 0.5, -1}}) {
      const auto p = with(c.alpha, c.beta);
      double prev = single_pulse_q_end_aligned(p, kTask, 1.0 - 0.05);
      for (double width = 0.1; width <= 1.0 + 1e-12; width += 0.05) {
        const double q = single_pulse_q_end_aligned(p, kTask, std::max(0.0, 1.0 - width));
        if (c.sign > 0) CHECK(q > prev);
        if (c.sign < 0) CHECK(q < prev);
        if (c.sign == 0) CHECK(q == doctest::Approx(prev).epsilon(1e-13));
        prev = q;
      }
    }
  }

  TEST_CASE("two_pulse_x reference values") {
    CHECK(two_pulse_x(with(1.0, 1.0), 1.0, 1.0, 0.5, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(two_pulse_x(with(0.5, 1.0), 1.0, kSecondHalf, 0.5, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(two_pulse_x(with(0.5, 1.0), 1.0, 1.0, 0.5, 1.0, 0.0, 1.1), std::domain_error);
    CHECK_THROWS_AS(two_pulse_x(with(0.5, 1.0), 1.0, 1.0, 1.5, 1.0, 0.0, 0.2), std::domain_error);
  }

  TEST_CASE("equal amplitudes reduce to one full-width pulse") {
    for (double a : {0.2, 0.7, 1.0}) {
      const auto p = with(a, 1.3);
      for (double t = 0.0; t <= 1.0; t += 0.05) {
        CHECK(two_pulse_x(p, 1.7, 1.7, 0.4, 1.0, 0.1, t) ==
              doctest::Approx(single_pulse_x(p, {0.0, 1.0, 1.7}, 0.1, t)).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("closed forms are continuous at segment boundaries") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      const auto p = with(0.05 + 0.95 * u(rng), 0.2 + 2.0 * u(rng));
      const double t_s = 0.05 + 0.9 * u(rng);
      const double i1 = 3.0 * u(rng);
      const double i2 = 3.0 * u(rng);
      const double eps = 1e-13;
      CHECK(std::abs(two_pulse_x(p, i1, i2, t_s, 1.0, 0.0, t_s - eps) - two_pulse_x(p, i1, i2, t_s, 1.0, 0.0, t_s)) <
            1e-9);
      const Pulse pulse{0.2, 0.2 + 0.5 * u(rng), 1.0 + u(rng)};
      for (double edge : {pulse.t_start, pulse.t_end}) {
        const double left = single_pulse_x(p, pulse, 0.0, std::nextafter(edge, 0.0));
        const double at = single_pulse_x(p, pulse, 0.0, edge);
        CHECK(std::abs(left - at) < 1e-12);
      }
    }
  }

  TEST_CASE("second_pulse_amplitude") {
    CHECK(second_pulse_amplitude(with(1.0, 1.0), kTask, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(second_pulse_amplitude(with(0.5, 1.0), kTask, 1.0, 0.5) == doctest::Approx(kSecondHalf).epsilon(1e-13));
    CHECK(rel_diff(second_pulse_amplitude(with(0.5, 1.0), kTask, 1.0, 0.5), 0.839102) < 3e-6);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      const auto p = with(0.05 + 0.95 * u(rng), 0.2 + 2.8 * u(rng));
      const double t_s = 0.01 + 0.98 * u(rng);
      CHECK(rel_diff(second_pulse_amplitude(p, kTask, 0.0, t_s), required_amplitude(p, kTask, t_s, 1.0)) < 1e-12);
      const double cap = first_pulse_amplitude_limit(p, kTask, t_s);
      const double i1 = cap * u(rng);
      const double i2 = second_pulse_amplitude(p, kTask, i1, t_s);
      CHECK(two_pulse_x(p, i1, i2, t_s, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(second_pulse_amplitude(p, kTask, cap, t_s) <= 1e-5 * (1.0 + i1));
      CHECK_THROWS_AS(second_pulse_amplitude(p, kTask, 1.01 * cap + 1e-6, t_s), InfeasibleError);
    }
    CHECK(std::isinf(first_pulse_amplitude_limit(with(0.5, 1.0), kTask, 0.0)));
  }

  TEST_CASE("two_pulse_q reference values") {
    CHECK(two_pulse_q(with(1.0, 1.0), kTask, 1.0, 0.5) == doctest::Approx(3.5).epsilon(1e-13));
    const auto p = with(0.5, 1.0);
    const double q = two_pulse_q(p, kTask, 1.0, 0.5);
    CHECK(q == doctest::Approx(3.743165235120073610).epsilon(1e-12));
    const PulseTrain train = two_pulse_train(1.0, kSecondHalf, 0.5, 1.0);
    CHECK(rel_diff(q, q_quadrature(p, train, 0.0, 1e-4)) <= 1e-6);
  }

  TEST_CASE("two_pulse_q at t_s = 0 is the full-width single pulse") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      const auto p = with(0.05 + 0.95 * u(rng), 0.2 + 2.8 * u(rng));
      const double i1 = 10.0 * u(rng);
      CHECK(rel_diff(two_pulse_q(p, kTask, i1, 0.0), single_pulse_q_end_aligned(p, kTask, 0.0)) < 1e-12);
    }
  }

  TEST_CASE("printed two-pulse losses agree with superposition") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      auto p = with(0.05 + 0.95 * u(rng), 0.2 + 2.8 * u(rng));
      p.A = 0.5 + 2.0 * u(rng);
      p.B = 0.5 + 8.0 * u(rng);
      p.kappa = 0.3 + 2.0 * u(rng);
      const SwitchingTask task{0.0, 1.0, 0.5 + u(rng)};
      const double t_s = task.t1 * (0.001 + 0.998 * u(rng));
      const double i1 = first_pulse_amplitude_limit(p, task, t_s) * u(rng);
      CHECK(rel_diff(two_pulse_q_compact(p, task, i1, t_s), two_pulse_q_superposed(p, task, i1, t_s)) < 1e-10);
    }
  }

  TEST_CASE("general tasks use superposition; the compact form refuses them") {
    const auto p = with(0.6, 1.0);
    const SwitchingTask task{0.2, 0.9, 1.0};
    CHECK_THROWS_AS(two_pulse_q_compact(p, task, 0.5, 0.4), std::domain_error);
    const double i1 = 0.5;
    const double i2 = second_pulse_amplitude(p, task, i1, 0.4);
    const PulseTrain train = two_pulse_train(i1, i2, 0.4, 1.0);
    CHECK(rel_diff(two_pulse_q(p, task, i1, 0.4), q_quadrature(p, train, task.x0, 1e-4)) < 1e-6);
    CHECK(two_pulse_x(p, i1, i2, 0.4, 1.0, task.x0, 1.0) == doctest::Approx(0.9).epsilon(1e-12));
  }

  TEST_CASE("pulse trains: closed form vs oracle and quadrature") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
      const auto p = with(0.1 + 0.9 * u(rng), 0.3 + 2.0 * u(rng));
      const PulseTrain train = fracmem::testing::random_train(rng, 1.0, 1e-3, 3);
      const auto drive = drive_signal(p, train, 1e-3);
      const auto oracle = oracle_solve(drive, p.alpha, 0.1);
      const auto closed = closed_form_trajectory(p, train, 0.1, drive.grid());
      CHECK(closed.source == TrajectorySource::ClosedForm);
      CHECK(closed.non_negative());
      CHECK(oracle.max_abs_difference(closed) <= 1e-6);
      CHECK(rel_diff(pulse_train_q(p, train, 0.1), q_quadrature(p, train, 0.1, 1e-3)) <= 1e-6);
    }
  }

  TEST_CASE("two_pulse_train drops an empty first pulse") {
    CHECK(two_pulse_train(1.0, 2.0, 0.0, 1.0).pulses().size() == 1);
    CHECK(two_pulse_train(1.0, 2.0, 0.3, 1.0).pulses().size() == 2);
  }
}
