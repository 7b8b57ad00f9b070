#include "fracmem/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fracmem {
namespace {

using Point = std::vector<double>;

struct Vertex {
  Point x;
  double f;
};

class BoxSimplex {
public:
  BoxSimplex(const std::function<double(std::span<const double>)>& objective, std::span<const double> lower,
             std::span<const double> upper)
      : objective_(objective), lower_(lower.begin(), lower.end()), upper_(upper.begin(), upper.end()) {}

  Point project(Point x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i], lower_[i], upper_[i]);
    }
    return x;
  }

  Vertex eval(Point x) {
    x = project(std::move(x));
    ++evals_;
    double f = objective_(x);
    if (std::isnan(f)) {
      f = std::numeric_limits<double>::infinity();
    }
    return {std::move(x), f};
  }

  int evals() const { return evals_; }
  double extent(std::size_t i) const { return upper_[i] - lower_[i]; }

private:
  const std::function<double(std::span<const double>)>& objective_;
  Point lower_;
  Point upper_;
  int evals_ = 0;
};

Point affine(const Point& centroid, const Point& x, double coeff) {
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = centroid[i] + coeff * (x[i] - centroid[i]);
  }
  return out;
}

} // namespace

NelderMeadResult nelder_mead_box(const std::function<double(std::span<const double>)>& objective, Point start,
                                 std::span<const double> lower, std::span<const double> upper,
                                 const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0 || lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("nelder_mead_box: dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(upper[i] > lower[i])) {
      throw std::invalid_argument("nelder_mead_box: empty box");
    }
  }

  BoxSimplex box(objective, lower, upper);
  Vertex best = box.eval(std::move(start));
  bool converged = false;

  for (int round = 0; round <= options.max_restarts; ++round) {
    std::vector<Vertex> simplex{best};
    for (std::size_t i = 0; i < n; ++i) {
      Point x = best.x;
      const double step = options.initial_step * box.extent(i);
      // Step inward when the incumbent sits on the upper face.
      x[i] += (x[i] + step <= upper[i]) ? step : -step;
      simplex.push_back(box.eval(std::move(x)));
    }

    converged = false;
    while (box.evals() < options.max_evals) {
      std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });

      double diameter = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          diameter = std::max(diameter, std::abs(simplex[k].x[i] - simplex[0].x[i]) / box.extent(i));
        }
      }
      const double spread = simplex[n].f - simplex[0].f;
      if (std::isfinite(spread) && spread <= options.f_tol * (std::abs(simplex[0].f) + 1e-300) &&
          diameter <= std::sqrt(options.x_tol)) {
        converged = true;
        break;
      }
      if (diameter <= options.x_tol) {
        converged = true;
        break;
      }

      Point centroid(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          centroid[i] += simplex[k].x[i] / static_cast<double>(n);
        }
      }

      Vertex& worst = simplex[n];
      Vertex reflected = box.eval(affine(centroid, worst.x, -1.0));
      if (reflected.f < simplex[0].f) {
        Vertex expanded = box.eval(affine(centroid, worst.x, -2.0));
        worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
        continue;
      }
      if (reflected.f < simplex[n - 1].f) {
        worst = std::move(reflected);
        continue;
      }
      const bool outside = reflected.f < worst.f;
      Vertex contracted = box.eval(affine(centroid, worst.x, outside ? -0.5 : 0.5));
      if (contracted.f < std::min(worst.f, reflected.f)) {
        worst = std::move(contracted);
        continue;
      }
      for (std::size_t k = 1; k <= n; ++k) {
        simplex[k] = box.eval(affine(simplex[0].x, simplex[k].x, 0.5));
      }
    }

    const auto it = std::min_element(simplex.begin(), simplex.end(),
                                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double improvement = best.f - it->f;
    const bool improved = it->f < best.f;
    if (improved) {
      best = *it;
    }
    if (!converged || box.evals() >= options.max_evals) {
      break;
    }
    if (!improved || improvement <= options.f_tol * std::abs(best.f)) {
      break;
    }
  }

  return {best.x, best.f, box.evals(), converged};
}

} // namespace fracmem
