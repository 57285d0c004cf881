#pragma once

#include "byzfed/estimators.hpp"

namespace byzfed {

/// One node's share of a horizontally federated LRCS instance: m~ rows of
/// every sensing matrix and the matching measurements.
struct LrcsNodeData {
  std::vector<Matrix> a;  // q blocks, each m~ x n
  Matrix y;               // m~ x q, column k = a[k] * x*_k

  Eigen::Index rows() const { return y.rows(); }      // m~
  Eigen::Index columns() const { return y.cols(); }   // q
};

struct LrcsGroundTruth {
  Matrix u_star;  // n x r, orthonormal columns
  Matrix b_star;  // r x q
  Matrix x_star;  // n x q = u_star * b_star
  double kappa = 1.0;  // condition number of the nonzero spectrum of X*
  double mu = 1.0;     // realized incoherence: max_k ||b*_k|| * sqrt(q/r) / sigma_max
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

struct LrcsInstance {
  Eigen::Index n = 0, q = 0;
  int r = 0, m = 0, num_nodes = 0, m_tilde = 0;
  LrcsGroundTruth truth;
  std::vector<LrcsNodeData> nodes;
  std::uint64_t seed = 0;
};

/// X* = U* B* with U* an orthonormalized Gaussian and b*_k i.i.d. N(0, I_r);
/// generated once per experiment, outside the Monte-Carlo loop.
LrcsGroundTruth make_lrcs_ground_truth(Eigen::Index n, Eigen::Index q, int r,
                                       std::uint64_t seed);
LrcsGroundTruth make_lrcs_ground_truth_from(Matrix u_star, Matrix b_star);

/// Fresh i.i.d. Gaussian sensing matrices split row-wise over the nodes.
LrcsInstance sample_lrcs_measurements(const LrcsGroundTruth& truth, int m, int num_nodes,
                                      std::uint64_t seed);

LrcsInstance generate_lrcs_instance(Eigen::Index n, Eigen::Index q, int r, int m,
                                    int num_nodes, std::uint64_t seed);

/// Zeroes the entries of y whose square exceeds alpha.
Vector truncate_measurements(const Vector& y, double alpha);

/// alpha_l = c~ * sum_k ||(y_k)_l||^2 / (m~ q).
double node_alpha(const LrcsNodeData& node, double c_tilde);

/// Column k of the node's backprojection matrix: (A_k)_l^T trunc((y_k)_l, alpha).
Matrix init_matrix_node(const LrcsNodeData& node, double alpha);

struct InitConfig {
  double c_tilde = 0.0;  // 0 derives 9 kappa^2 mu^2 with mu = 2 from the instance
  int t_pow = 10;
  int t_gm = 10;
  int minibatches = 1;  // L~ for the MoM variant
};

double default_c_tilde(const LrcsInstance& instance);

struct SpectralInitResult {
  SubspaceEstimate estimate;
  double alpha = 0.0;              // median truncation threshold in effect
  std::vector<double> node_sdf;    // SD_F(U*, basis_l) per node/batch diagnostics
};

/// Initialization via Subspace Median: median of the node alphas, per-node
/// r-SVD of the backprojection matrix by power method, Subspace-Median over
/// the L bases. Byzantine nodes substitute both the scalar and the basis.
SpectralInitResult spectral_init_median(const LrcsInstance& instance, const InitConfig& cfg,
                                        const FederationConfig& fed,
                                        const Adversary& scalar_adversary,
                                        const Adversary& matrix_adversary,
                                        std::uint64_t seed);

/// Initialization via Subspace Median-of-Means: per minibatch, a federated
/// power method with two exchanges per iteration (V then U), then
/// Subspace-Median over the batch outputs. The Byzantine set stays fixed
/// across these rounds.
SpectralInitResult spectral_init_mom(const LrcsInstance& instance, const InitConfig& cfg,
                                     const FederationConfig& fed,
                                     const Adversary& scalar_adversary,
                                     const Adversary& matrix_adversary,
                                     std::uint64_t seed);

struct GdConfig {
  double eta = 0.0;      // 0 derives 0.5 / sigma_max^2 from the instance
  int iterations = 50;   // T
  double omega = 0.0;    // 0 derives the gradient-norm threshold heuristic
  int t_gm = 10;
  int minibatches = 1;   // L~
  bool sample_splitting = false;
  double eps_exit = 0.0;  // stop once SD_F / sqrt(r) drops below; 0 disables
};

double default_eta(const LrcsInstance& instance);

/// Gradient-norm threshold m~ * 14 * sqrt(r) * delta0 * sigma_max_hat scaled by
/// the minibatch size, so a batch sum of honest gradients passes. The two-arg
/// form uses the library's default delta0.
double default_gradient_omega(const LrcsInstance& instance, const GdConfig& cfg,
                              double delta0);
double default_gradient_omega(const LrcsInstance& instance, const GdConfig& cfg);

struct LsResult {
  Matrix b;  // r x q
  Matrix x;  // n x q = U * b
};

/// Per-column least squares b_k = ((A_k)_l U)^dagger (y_k)_l over the given row
/// window (the full m~ rows by default).
LsResult ls_step(const BasisMatrix& u, const LrcsNodeData& node, Eigen::Index row_begin = 0,
                 Eigen::Index row_count = -1);

/// Gradient of f_l(U) = sum_k ||(y_k)_l - (A_k)_l U b_k||^2 with B fixed.
Matrix node_gradient(const BasisMatrix& u, const Matrix& b, const LrcsNodeData& node,
                     Eigen::Index row_begin = 0, Eigen::Index row_count = -1);

struct AltGdMinState {
  BasisMatrix u;
  std::vector<Matrix> node_b;       // per-node r x q estimates of the last round
  std::vector<double> error_trace;  // SD_F(U*, U_t) per completed iteration
  int iterations_done = 0;
  Eigen::Index rows_consumed = 0;   // sample-splitting guard
  std::vector<int> filtered_trace;  // minibatch gradients dropped by the norm filter
};

AltGdMinState make_altgdmin_state(const LrcsInstance& instance, BasisMatrix u0);

/// One Byz-AltGDmin iteration: per-node least squares and gradient, minibatch
/// sums, thresholded GM at omega, projected GD step
/// U+ = QR(U - eta / (rho m~) * grad_gm).
AltGdMinState gd_round(AltGdMinState state, const LrcsInstance& instance, const GdConfig& cfg,
                       const FederationConfig& fed, const Adversary& adversary);

enum class InitMode { Median, MoM };

struct AltGdMinResult {
  AltGdMinState state;
  SpectralInitResult init;
  std::vector<double> error_trace;  // Error = SD_F / sqrt(r), entry 0 at init
  double max_column_error = 0.0;    // max_{l,k} ||(x_k)_l - x*_k|| / ||x*_k||
};

/// Complete pipeline: spectral init (median or MoM) followed by T gd_rounds
/// with the epsilon exit rule.
AltGdMinResult byz_altgdmin(const LrcsInstance& instance, const InitConfig& init_cfg,
                            const GdConfig& gd_cfg, const FederationConfig& fed,
                            const Adversary& scalar_adversary,
                            const Adversary& matrix_adversary, InitMode init_mode,
                            std::uint64_t seed);

}  // namespace byzfed
