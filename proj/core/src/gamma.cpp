#include "fracmem/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracmem {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Γ(z) for z >= 0.5.
double lanczos(double z) {
  const double zm1 = z - 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    series += kLanczosCoeffs[i] / (zm1 + static_cast<double>(i));
  }
  const double t = zm1 + kLanczosG + 0.5;
  // t^(zm1+0.5) split in two halves keeps the intermediate finite up to z ~ 171.
  const double half_power = std::pow(t, 0.5 * (zm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * series;
}

} // namespace

double gamma(double z) {
  if (!std::isfinite(z) || z <= 0.0) {
    throw std::domain_error("gamma: argument must be positive and finite, got " + std::to_string(z));
  }
  if (z < 0.5) {
    return lanczos(z + 1.0) / z;
  }
  return lanczos(z);
}

} // namespace fracmem
