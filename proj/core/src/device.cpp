#include "fracmem/device.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracmem {
namespace {

void require(bool ok, const char* field, const char* rule, double value) {
  if (!ok) {
    throw std::invalid_argument(std::string(field) + ": must be " + rule + ", got " + std::to_string(value));
  }
}

} // namespace

void DeviceParams::validate() const {
  require(std::isfinite(A) && A > 0.0, "A", "positive", A);
  require(std::isfinite(B) && B > 0.0, "B", "positive", B);
  require(std::isfinite(kappa) && kappa > 0.0, "kappa", "positive", kappa);
  require(std::isfinite(beta) && beta > 0.0, "beta", "positive", beta);
  // alpha is range-checked by FractionalOrder itself.
}

void SwitchingTask::validate() const {
  require(std::isfinite(x0) && x0 >= 0.0, "x0", "non-negative", x0);
  require(std::isfinite(x1) && x1 >= 0.0, "x1", "non-negative", x1);
  require(x1 != x0, "x1", "different from x0", x1);
  require(std::isfinite(t1) && t1 > 0.0, "t1", "positive", t1);
}

double memristance(const DeviceParams& p, double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("memristance: state must satisfy x >= 0, got " + std::to_string(x));
  }
  return p.A + p.B * x;
}

double voltage(const DeviceParams& p, double x, double current) { return memristance(p, x) * current; }

double state_rate(const DeviceParams& p, double current) {
  if (current == 0.0) {
    return 0.0;
  }
  const double magnitude = p.kappa * std::pow(std::abs(current), p.beta);
  return current > 0.0 ? magnitude : -magnitude;
}

} // namespace fracmem
