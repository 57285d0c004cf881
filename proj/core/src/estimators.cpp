#include "byzfed/estimators.hpp"

#include <cmath>

#include "byzfed/rng.hpp"

namespace byzfed {

namespace {

constexpr std::uint64_t kURandTag = 0x5552414E44ull;    // "URAND"
constexpr std::uint64_t kSalvageTag = 0x53414C56ull;    // "SALV"

GmConfig gm_config(const EstimatorConfig& cfg) {
  GmConfig gm;
  gm.max_iterations = cfg.t_gm;
  return gm;
}

int resolve_minibatches(const EstimatorConfig& cfg, const FederationConfig& fed) {
  if (cfg.minibatches == 0) return fed.minibatches;
  if (cfg.minibatches != fed.minibatches)
    throw ConfigError("estimator and federation disagree on minibatch count");
  return cfg.minibatches;
}

}  // namespace

std::uint64_t u_rand_stream(std::uint64_t seed) { return derive_seed(seed, kURandTag); }

Matrix u_rand(Eigen::Index n, int r, std::uint64_t seed) {
  Rng rng(u_rand_stream(seed));
  return gaussian_matrix(n, r, rng);
}

SubspaceEstimate subspace_median(const std::vector<Matrix>& node_bases,
                                 const EstimatorConfig& cfg, std::uint64_t seed) {
  const int count = static_cast<int>(node_bases.size());
  if (count < 2) throw ConfigError("subspace_median: need at least two node bases");
  const Eigen::Index n = node_bases.front().rows();
  const Eigen::Index r = node_bases.front().cols();
  for (const auto& b : node_bases)
    if (b.rows() != n || b.cols() != r)
      throw DimensionMismatchError("subspace_median: node basis shapes differ");

  std::vector<BasisMatrix> bases;
  bases.reserve(count);
  for (int l = 0; l < count; ++l) {
    try {
      bases.push_back(orthonormalize(node_bases[l]));
    } catch (const RankDeficientError&) {
      // A payload the center cannot orthonormalize is replaced by a random
      // basis; the GM tolerates any minority of junk.
      Rng rng(derive_seed(seed, kSalvageTag, static_cast<std::uint64_t>(l)));
      bases.push_back(orthonormalize(gaussian_matrix(n, r, rng)));
    }
  }

  std::vector<Vector> projections;
  projections.reserve(count);
  for (const auto& b : bases) projections.push_back(vectorize(projection(b).matrix()));
  const GmResult gm = weiszfeld_gm(projections, gm_config(cfg));

  int best = 0;
  double best_residual = (projections[0] - gm.point).norm();
  for (int l = 1; l < count; ++l) {
    const double res = (projections[l] - gm.point).norm();
    if (res < best_residual) {
      best_residual = res;
      best = l;
    }
  }
  return SubspaceEstimate{bases[best], best + 1, best_residual, 1};
}

SubspaceEstimate res_pow_meth(const std::vector<NodeOperator>& node_apply, Eigen::Index n,
                              const EstimatorConfig& cfg, const FederationConfig& fed,
                              const Adversary& adversary, std::uint64_t seed) {
  fed.validate();
  if (static_cast<int>(node_apply.size()) != fed.num_nodes)
    throw ConfigError("res_pow_meth: one operator per node required");
  if (cfg.omega <= 0.0) throw ConfigError("res_pow_meth: omega must be positive");
  if (cfg.t_pow < 1) throw ConfigError("res_pow_meth: t_pow must be >= 1");

  Matrix iterate = u_rand(n, cfg.rank, seed);  // unnormalized, as the center starts
  for (int t = 0; t < cfg.t_pow; ++t) {
    const CenterState state{iterate, t};
    const HonestCompute honest = [&](int id) -> PayloadContent {
      return node_apply[id - 1](iterate);
    };
    const std::vector<RoundPayload> transcript = run_round(fed, state, honest, adversary);
    std::vector<Vector> payloads;
    payloads.reserve(transcript.size());
    for (const auto& p : transcript) payloads.push_back(vectorize(std::get<Matrix>(p.content)));
    const GmResult gm = thresholded_gm(payloads, cfg.omega, gm_config(cfg));
    iterate = orthonormalize_or_complete(unvectorize(gm.point, n, cfg.rank)).columns();
  }
  return SubspaceEstimate{BasisMatrix(iterate), std::nullopt, 0.0, cfg.t_pow};
}

SubspaceEstimate subspace_mom(const std::vector<NodeOperator>& node_apply, Eigen::Index n,
                              const EstimatorConfig& cfg, const FederationConfig& fed,
                              const Adversary& adversary, std::uint64_t seed) {
  fed.validate();
  if (static_cast<int>(node_apply.size()) != fed.num_nodes)
    throw ConfigError("subspace_mom: one operator per node required");
  const int batches = resolve_minibatches(cfg, fed);
  if (batches < 2) throw ConfigError("subspace_mom: need at least two minibatches");
  const int rho = fed.num_nodes / batches;

  const Matrix start = u_rand(n, cfg.rank, seed);
  std::vector<Matrix> batch_iterate(batches, start);

  for (int t = 0; t < cfg.t_pow; ++t) {
    const CenterState state{Matrix(), t};
    const HonestCompute honest = [&](int id) -> PayloadContent {
      const int theta = (id - 1) / rho;  // 0-based batch of this node
      return node_apply[id - 1](batch_iterate[theta]);
    };
    const std::vector<RoundPayload> transcript = run_round(fed, state, honest, adversary);
    for (int theta = 0; theta < batches; ++theta) {
      Matrix sum = Matrix::Zero(n, cfg.rank);
      for (int ell = 1; ell <= rho; ++ell) {
        const int id = minibatch_index(theta + 1, ell, rho, batches);
        sum += std::get<Matrix>(transcript[id - 1].content);
      }
      batch_iterate[theta] = orthonormalize_or_complete(sum).columns();
    }
  }

  SubspaceEstimate med = subspace_median(batch_iterate, cfg, seed);
  med.rounds = cfg.t_pow + 1;
  return med;
}

SubspaceEstimate svd_res_cov_est(const std::vector<Matrix>& node_matrices,
                                 const EstimatorConfig& cfg, std::uint64_t seed) {
  if (node_matrices.empty()) throw EmptyInputError("svd_res_cov_est: no inputs");
  const Eigen::Index n = node_matrices.front().rows();
  for (const auto& m : node_matrices)
    if (m.rows() != n || m.cols() != n)
      throw DimensionMismatchError("svd_res_cov_est: inputs must be square of equal size");

  const GmResult gm = weiszfeld_gm(vectorize_all(node_matrices), gm_config(cfg));
  Matrix estimate = unvectorize(gm.point, n, n);
  estimate = ((estimate + estimate.transpose()) * 0.5).eval();

  PowerMethodConfig pm;
  pm.rank = cfg.rank;
  pm.iterations = cfg.t_pow;
  pm.seed = u_rand_stream(seed);
  const BasisMatrix basis = power_method_topr(
      [&estimate](const Matrix& x) -> Matrix { return estimate * x; }, n, pm);
  return SubspaceEstimate{basis, std::nullopt, 0.0, 1};
}

SubspaceEstimate federated_power_method_baseline(const std::vector<NodeOperator>& node_apply,
                                                 Eigen::Index n, const EstimatorConfig& cfg,
                                                 std::uint64_t seed) {
  if (node_apply.empty()) throw EmptyInputError("federated_power_method_baseline: no nodes");
  if (cfg.t_pow < 1) throw ConfigError("federated_power_method_baseline: t_pow must be >= 1");
  Matrix iterate = u_rand(n, cfg.rank, seed);
  BasisMatrix basis = BasisMatrix(Matrix::Identity(n, cfg.rank));
  for (int t = 0; t < cfg.t_pow; ++t) {
    Matrix sum = Matrix::Zero(n, cfg.rank);
    for (const auto& apply : node_apply) sum += apply(iterate);
    basis = orthonormalize(sum);
    iterate = basis.columns();
  }
  return SubspaceEstimate{basis, std::nullopt, 0.0, cfg.t_pow};
}

}  // namespace byzfed
