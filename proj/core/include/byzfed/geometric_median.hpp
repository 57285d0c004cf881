#pragma once

#include <vector>

#include "byzfed/linalg.hpp"

namespace byzfed {

struct GmConfig {
  int max_iterations = 10;        // T_gm
  double step_tolerance = 1e-10;  // stop once the iterate moves less than this
  double denom_guard = 1e-12;     // relative floor for inverse-distance weights

  enum class Init {
    Average,        // mean of the input points; what the experiments use
    AnchorDescent,  // start from the best input point moved along the descent direction
  };
  Init init = Init::Average;
};

struct GmResult {
  Vector point;
  int iterations_used = 0;
  double objective = 0.0;  // sum of distances from point to the inputs
  int filtered_count = 0;  // points removed by the norm filter (thresholded variant)
  std::vector<double> objective_trace;  // objective after init and each accepted step
};

/// Sum over the inputs of ||z - z_l||.
double gm_objective(const std::vector<Vector>& points, const Vector& z);

/// Weiszfeld's inverse-distance-weighted fixed-point iteration for the
/// geometric median. The objective is non-increasing across iterations; a
/// step that would increase it (possible only at the clamped singularities)
/// is rejected and iteration stops there.
GmResult weiszfeld_gm(const std::vector<Vector>& points, const GmConfig& cfg = {});

/// Weiszfeld on the subset of points whose norm is at most omega. Throws
/// AllFilteredError when nothing survives.
GmResult thresholded_gm(const std::vector<Vector>& points, double omega,
                        const GmConfig& cfg = {});

/// Sample median; even counts average the two central order statistics.
double scalar_median(const std::vector<double>& values);

/// Column-major flattening used whenever matrices are fed to the GM.
inline Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvectorize(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

std::vector<Vector> vectorize_all(const std::vector<Matrix>& mats);

}  // namespace byzfed
