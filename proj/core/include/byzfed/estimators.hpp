#pragma once

#include <optional>

#include "byzfed/fed_sim.hpp"
#include "byzfed/geometric_median.hpp"

namespace byzfed {

struct EstimatorConfig {
  int rank = 1;            // r
  int t_pow = 10;          // power iterations
  int t_gm = 10;           // Weiszfeld iterations
  double omega = 0.0;      // ResPowMeth norm threshold; required > 0 there
  int minibatches = 0;     // L~ for subspace_mom; 0 inherits the federation's value
};

struct SubspaceEstimate {
  BasisMatrix basis;
  std::optional<int> best_node;  // l_best (1-based); the batch index for the MoM variant
  double gm_residual = 0.0;      // min_l ||P_l - P_gm||_F where applicable
  int rounds = 0;
};

using NodeOperator = std::function<Matrix(const Matrix&)>;

/// Stream used to draw the shared U_rand: every estimator called with the same
/// seed starts its power method from the same Gaussian matrix.
std::uint64_t u_rand_stream(std::uint64_t seed);
Matrix u_rand(Eigen::Index n, int r, std::uint64_t seed);

/// Subspace Median: orthonormalize every node basis (payloads that fail QR are
/// replaced by a seeded random basis), take the geometric median of the
/// vectorized projection matrices, and return the node basis whose projector
/// is closest to it (ties to the lowest index).
SubspaceEstimate subspace_median(const std::vector<Matrix>& node_bases,
                                 const EstimatorConfig& cfg, std::uint64_t seed = 0);

/// Resilient power method: per round collect node payloads Phi_l * U, drop the
/// ones with Frobenius norm above cfg.omega, take the GM of the survivors and
/// orthonormalize. U_0 is the raw (unnormalized) shared Gaussian init.
SubspaceEstimate res_pow_meth(const std::vector<NodeOperator>& node_apply, Eigen::Index n,
                              const EstimatorConfig& cfg, const FederationConfig& fed,
                              const Adversary& adversary, std::uint64_t seed);

/// Subspace Median-of-Means: one honest federated power method per minibatch
/// (sum within the batch, QR at the center), all started from the same U_rand,
/// then subspace_median over the batch outputs.
SubspaceEstimate subspace_mom(const std::vector<NodeOperator>& node_apply, Eigen::Index n,
                              const EstimatorConfig& cfg, const FederationConfig& fed,
                              const Adversary& adversary, std::uint64_t seed);

/// GM of the vectorized node matrices, symmetrized, followed by r-SVD.
SubspaceEstimate svd_res_cov_est(const std::vector<Matrix>& node_matrices,
                                 const EstimatorConfig& cfg, std::uint64_t seed = 0);

/// Plain federated power method U <- QR(sum_l Phi_l U); the no-attack baseline.
SubspaceEstimate federated_power_method_baseline(const std::vector<NodeOperator>& node_apply,
                                                 Eigen::Index n, const EstimatorConfig& cfg,
                                                 std::uint64_t seed);

}  // namespace byzfed
