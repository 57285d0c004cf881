#include "byzfed/pca.hpp"

#include <algorithm>
#include <cmath>

#include "byzfed/rng.hpp"

namespace byzfed {

namespace {

void check_spectrum(const Vector& spectrum, Eigen::Index n) {
  if (spectrum.size() != n)
    throw InvalidSpectrumError("spectrum length must equal the ambient dimension");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(spectrum(i) >= 0.0))
      throw InvalidSpectrumError("spectrum entries must be nonnegative");
    if (i > 0 && spectrum(i) > spectrum(i - 1) + 1e-12)
      throw InvalidSpectrumError("spectrum must be nonincreasing");
  }
}

// Descending singular values of Phi_l through the smaller-dimension Gram matrix.
Vector shard_covariance_spectrum(const Matrix& d) {
  const Eigen::Index n = d.rows();
  const Eigen::Index q = d.cols();
  Matrix gram;
  if (q <= n)
    gram = d.transpose() * d / static_cast<double>(q);
  else
    gram = d * d.transpose() / static_cast<double>(q);
  gram = ((gram + gram.transpose()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  Vector vals = eig.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = std::max(vals(i), 0.0);
  return vals;  // length min(n, q); the remaining Phi_l singular values are zero
}

}  // namespace

Matrix PcaModel::covariance() const {
  return u_star_full * spectrum.asDiagonal() * u_star_full.transpose();
}

BasisMatrix PcaModel::top_r() const { return BasisMatrix(u_star_full.leftCols(r)); }

double PcaModel::gap() const {
  const double next = r < n ? spectrum(r) : 0.0;
  return spectrum(r - 1) - next;
}

Vector spectrum_full_rank_15(Eigen::Index n, int r) {
  if (r + 1 > n) throw InvalidSpectrumError("full_rank_15 needs n > r");
  Vector s(n);
  for (int i = 0; i < r; ++i) s(i) = 15.0;
  s(r) = 1.0;
  for (Eigen::Index i = r + 1; i < n; ++i)
    s(i) = 1.0 - static_cast<double>(i - r) / static_cast<double>(n);
  return s;
}

Vector spectrum_low_rank_15(Eigen::Index n, int r) {
  if (r + 1 > n) throw InvalidSpectrumError("low_rank_15 needs n > r");
  Vector s = Vector::Zero(n);
  for (int i = 0; i < r; ++i) s(i) = 15.0;
  s(r) = 1.0;
  return s;
}

Vector spectrum_from_name(const std::string& name, Eigen::Index n, int r) {
  if (name == "full_rank_15") return spectrum_full_rank_15(n, r);
  if (name == "low_rank_15") return spectrum_low_rank_15(n, r);
  throw InvalidSpectrumError("unknown spectrum name: " + name);
}

PcaModel generate_pca_model(Eigen::Index n, int r, const Vector& spectrum,
                            std::uint64_t seed) {
  if (r < 1 || r >= n) throw ConfigError("generate_pca_model: need 1 <= r < n");
  check_spectrum(spectrum, n);
  Rng rng(derive_seed(seed, 0x504341u));  // model stream
  PcaModel model;
  model.n = n;
  model.r = r;
  model.spectrum = spectrum;
  // A square Gaussian matrix is full rank almost surely; the completing QR
  // avoids an n x n SVD here.
  model.u_star_full = orthonormalize_or_complete(gaussian_matrix(n, n, rng)).columns();
  model.seed = seed;
  return model;
}

PcaModel generate_pca_model(Eigen::Index n, int r, const std::string& spectrum_name,
                            std::uint64_t seed) {
  return generate_pca_model(n, r, spectrum_from_name(spectrum_name, n, r), seed);
}

PcaShards sample_shards(const PcaModel& model, Eigen::Index q, int num_nodes,
                        std::uint64_t seed) {
  if (num_nodes < 1 || q % num_nodes != 0)
    throw IndivisibleSplitError("sample_shards: num_nodes must divide q");
  // Sample through U* S^{1/2} g restricted to the nonzero spectrum entries so
  // rank-deficient models are exact.
  Eigen::Index k = 0;
  while (k < model.n && model.spectrum(k) > 0.0) ++k;
  const Eigen::Index q_tilde = q / num_nodes;
  Rng rng(derive_seed(seed, 0x53484152u));  // shard stream
  PcaShards out;
  out.shards.reserve(num_nodes);
  if (k == 0) {
    for (int l = 0; l < num_nodes; ++l)
      out.shards.push_back(Matrix::Zero(model.n, q_tilde));
    return out;
  }
  const Matrix factor =
      model.u_star_full.leftCols(k) * model.spectrum.head(k).cwiseSqrt().asDiagonal();
  for (int l = 0; l < num_nodes; ++l) {
    const Matrix g = gaussian_matrix(k, q_tilde, rng);
    out.shards.push_back(factor * g);
  }
  return out;
}

Matrix node_covariance(const Matrix& d) {
  if (d.cols() < 1) throw EmptyInputError("node_covariance: shard has no columns");
  Matrix phi = d * d.transpose() / static_cast<double>(d.cols());
  return ((phi + phi.transpose()) * 0.5).eval();
}

PcaParamEstimates estimate_pca_params(const PcaShards& shards, int r, bool select_rank,
                                      double energy_threshold) {
  if (shards.shards.empty()) throw EmptyInputError("estimate_pca_params: no shards");
  PcaParamEstimates est;
  est.delta_hat = std::numeric_limits<double>::infinity();
  int r_sel = 0;
  for (const auto& d : shards.shards) {
    if (r + 1 > std::min(d.rows(), d.cols()))
      throw DimensionMismatchError("estimate_pca_params: need r + 1 <= min(n, q~)");
    const Vector vals = shard_covariance_spectrum(d);
    est.sigma_1_hat = std::max(est.sigma_1_hat, vals(0));
    est.sigma_r_hat = std::max(est.sigma_r_hat, vals(r - 1));
    est.delta_hat = std::min(est.delta_hat, vals(r - 1) - vals(r));
    if (select_rank) {
      const double total = vals.sum();
      double acc = 0.0;
      int rl = static_cast<int>(vals.size());
      for (Eigen::Index i = 0; i < vals.size(); ++i) {
        acc += vals(i);
        if (acc >= energy_threshold * total) {
          rl = static_cast<int>(i) + 1;
          break;
        }
      }
      r_sel = std::max(r_sel, rl);
    }
  }
  if (!(est.delta_hat > 0.0))
    throw DegenerateGapError("estimate_pca_params: estimated spectral gap is not positive");
  if (select_rank) est.r_selected = r_sel;
  return est;
}

int suggest_t_pow(const PcaParamEstimates& est, Eigen::Index n, double eps, double c) {
  if (eps <= 0.0 || eps >= 1.0) throw ConfigError("suggest_t_pow: eps must be in (0, 1)");
  const double value =
      c * (est.sigma_r_hat / est.delta_hat) * std::log(static_cast<double>(n) / eps);
  return std::max(1, static_cast<int>(std::ceil(value)));
}

double estimate_sigma1(const PcaShards& shards, int iterations, std::uint64_t seed) {
  if (shards.shards.empty()) throw EmptyInputError("estimate_sigma1: no shards");
  double best = 0.0;
  int l = 0;
  for (const auto& d : shards.shards) {
    const double q_tilde = static_cast<double>(d.cols());
    Rng rng(derive_seed(seed, 0x5331u, static_cast<std::uint64_t>(l++)));
    Vector v = gaussian_vector(d.rows(), rng);
    v.normalize();
    double lambda = 0.0;
    for (int t = 0; t < iterations; ++t) {
      Vector w = d * (d.transpose() * v) / q_tilde;
      lambda = w.norm();
      if (lambda == 0.0) break;
      v = w / lambda;
    }
    best = std::max(best, lambda);
  }
  return best;
}

}  // namespace byzfed
