#pragma once

#include <cmath>
#include <vector>

#include "byzfed/geometric_median.hpp"
#include "byzfed/linalg.hpp"
#include "byzfed/rng.hpp"

namespace testsupport {

using byzfed::Matrix;
using byzfed::Vector;

inline byzfed::BasisMatrix random_basis(Eigen::Index n, int r, std::uint64_t seed) {
  byzfed::Rng rng(seed);
  return byzfed::orthonormalize(byzfed::gaussian_matrix(n, r, rng));
}

inline Matrix random_orthogonal(Eigen::Index n, std::uint64_t seed) {
  byzfed::Rng rng(seed);
  return byzfed::orthonormalize_or_complete(byzfed::gaussian_matrix(n, n, rng)).columns();
}

inline std::vector<Vector> random_points(int count, int dim, std::uint64_t seed,
                                         double scale = 1.0) {
  byzfed::Rng rng(seed);
  std::vector<Vector> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i)
    points.push_back(scale * byzfed::gaussian_vector(dim, rng));
  return points;
}

// Geometric-median oracle independent of the Weiszfeld path: minimizes the
// smoothed objective f_eps(z) = sum sqrt(||z - p||^2 + eps^2) by gradient
// descent with Armijo backtracking, annealing eps toward zero, restarting from
// every input point and the mean.
inline Vector oracle_gm(const std::vector<Vector>& points, double* objective_out = nullptr) {
  const Eigen::Index d = points.front().size();
  double scale = 1e-12;
  for (const auto& p : points) scale = std::max(scale, p.norm());

  const auto smoothed = [&](const Vector& z, double eps, Vector* grad) -> double {
    double f = 0.0;
    if (grad) grad->setZero();
    for (const auto& p : points) {
      const Vector diff = z - p;
      const double dist = std::sqrt(diff.squaredNorm() + eps * eps);
      f += dist;
      if (grad) *grad += diff / dist;
    }
    return f;
  };

  const auto minimize_from = [&](Vector z) -> Vector {
    for (double eps = 1e-2 * scale; eps > 1e-12 * scale; eps *= 1e-2) {
      for (int it = 0; it < 4000; ++it) {
        Vector grad(d);
        const double f = smoothed(z, eps, &grad);
        const double gnorm = grad.norm();
        if (gnorm < 1e-14) break;
        double step = scale;
        bool moved = false;
        while (step > 1e-18 * scale) {
          const Vector cand = z - step * grad;
          if (smoothed(cand, eps, nullptr) < f - 0.5 * step * gnorm * gnorm) {
            z = cand;
            moved = true;
            break;
          }
          step *= 0.5;
        }
        if (!moved) break;
      }
    }
    return z;
  };

  Vector mean = Vector::Zero(d);
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());

  Vector best = minimize_from(mean);
  double best_obj = byzfed::gm_objective(points, best);
  for (const auto& p : points) {
    const Vector cand = minimize_from(p);
    const double obj = byzfed::gm_objective(points, cand);
    if (obj < best_obj) {
      best_obj = obj;
      best = cand;
    }
  }
  if (objective_out) *objective_out = best_obj;
  return best;
}

}  // namespace testsupport
