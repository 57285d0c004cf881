#include "byzfed/geometric_median.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace byzfed {

namespace {

void check_points(const std::vector<Vector>& points, const char* who) {
  if (points.empty()) throw EmptyInputError(std::string(who) + ": empty point set");
  const Eigen::Index d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d)
      throw DimensionMismatchError(std::string(who) + ": points of unequal dimension");
    if (!p.allFinite())
      throw DimensionMismatchError(std::string(who) + ": non-finite point");
  }
}

Vector average(const std::vector<Vector>& points) {
  Vector sum = Vector::Zero(points.front().size());
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

// Appendix-style analytic start: take the best input point and move it along
// the descent direction -R_p by the prescribed step. If ||R_p|| <= 1 the
// anchor itself is already the minimizer.
Vector anchor_descent_init(const std::vector<Vector>& points, double guard) {
  std::size_t best = 0;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double obj = gm_objective(points, points[i]);
    if (obj < best_obj) {
      best_obj = obj;
      best = i;
    }
  }
  const Vector& anchor = points[best];
  Vector resultant = Vector::Zero(anchor.size());
  double inv_dist_sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == best) continue;
    const double dist = (anchor - points[i]).norm();
    if (dist <= guard) continue;  // co-located duplicates contribute nothing
    resultant += (anchor - points[i]) / dist;
    inv_dist_sum += 1.0 / dist;
  }
  const double rnorm = resultant.norm();
  if (rnorm <= 1.0 || inv_dist_sum <= 0.0) return anchor;
  const double step = (rnorm - 1.0) / inv_dist_sum;
  return anchor - step * resultant / rnorm;
}

}  // namespace

double gm_objective(const std::vector<Vector>& points, const Vector& z) {
  check_points(points, "gm_objective");
  if (z.size() != points.front().size())
    throw DimensionMismatchError("gm_objective: query dimension mismatch");
  double sum = 0.0;
  for (const auto& p : points) sum += (z - p).norm();
  return sum;
}

GmResult weiszfeld_gm(const std::vector<Vector>& points, const GmConfig& cfg) {
  check_points(points, "weiszfeld_gm");
  if (cfg.max_iterations < 1 || cfg.step_tolerance <= 0.0 || cfg.denom_guard <= 0.0)
    throw ConfigError("weiszfeld_gm: invalid GmConfig");

  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.norm());
  const double guard = cfg.denom_guard * std::max(1.0, scale);

  GmResult out;
  out.point = cfg.init == GmConfig::Init::Average ? average(points)
                                                  : anchor_descent_init(points, guard);
  out.objective = gm_objective(points, out.point);
  out.objective_trace.push_back(out.objective);

  for (int t = 1; t <= cfg.max_iterations; ++t) {
    Vector weighted = Vector::Zero(out.point.size());
    double weight_sum = 0.0;
    for (const auto& p : points) {
      const double dist = std::max((out.point - p).norm(), guard);
      weighted += p / dist;
      weight_sum += 1.0 / dist;
    }
    Vector next = weighted / weight_sum;
    const double next_obj = gm_objective(points, next);
    if (next_obj > out.objective) break;  // only reachable at clamped singularities
    const double step = (next - out.point).norm();
    out.point = std::move(next);
    out.objective = next_obj;
    out.objective_trace.push_back(next_obj);
    out.iterations_used = t;
    if (step < cfg.step_tolerance) break;
  }
  return out;
}

GmResult thresholded_gm(const std::vector<Vector>& points, double omega,
                        const GmConfig& cfg) {
  check_points(points, "thresholded_gm");
  if (omega <= 0.0) throw ConfigError("thresholded_gm: omega must be positive");
  std::vector<Vector> kept;
  kept.reserve(points.size());
  for (const auto& p : points)
    if (p.norm() <= omega) kept.push_back(p);
  if (kept.empty())
    throw AllFilteredError("thresholded_gm: every point exceeds the norm threshold");
  GmResult out = weiszfeld_gm(kept, cfg);
  out.filtered_count = static_cast<int>(points.size() - kept.size());
  return out;
}

double scalar_median(const std::vector<double>& values) {
  if (values.empty()) throw EmptyInputError("scalar_median: empty input");
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

std::vector<Vector> vectorize_all(const std::vector<Matrix>& mats) {
  std::vector<Vector> out;
  out.reserve(mats.size());
  for (const auto& m : mats) out.push_back(vectorize(m));
  return out;
}

}  // namespace byzfed
