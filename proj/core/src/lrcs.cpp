#include "byzfed/lrcs.hpp"

#include <cmath>
#include <limits>

#include "byzfed/geometric_median.hpp"
#include "byzfed/rng.hpp"

namespace byzfed {

namespace {

constexpr double kLsSingularFloor = 1e-10;
constexpr std::uint64_t kTruthTag = 0x4C524353ull;  // "LRCS"
constexpr std::uint64_t kMeasTag = 0x4D454153ull;   // "MEAS"

void fill_spectrum_stats(LrcsGroundTruth& truth) {
  Eigen::BDCSVD<Matrix> svd(truth.b_star);
  const auto& sv = svd.singularValues();
  truth.sigma_max = sv(0);
  truth.sigma_min = sv(sv.size() - 1);
  truth.kappa = truth.sigma_min > 0.0 ? truth.sigma_max / truth.sigma_min
                                      : std::numeric_limits<double>::infinity();
  double max_col = 0.0;
  for (Eigen::Index k = 0; k < truth.b_star.cols(); ++k)
    max_col = std::max(max_col, truth.b_star.col(k).norm());
  const double q = static_cast<double>(truth.b_star.cols());
  const double r = static_cast<double>(truth.b_star.rows());
  truth.mu = truth.sigma_max > 0.0 ? max_col * std::sqrt(q / r) / truth.sigma_max : 1.0;
}

Eigen::Index resolve_rows(const LrcsNodeData& node, Eigen::Index row_begin,
                          Eigen::Index row_count) {
  if (row_count < 0) row_count = node.rows() - row_begin;
  if (row_begin < 0 || row_count < 1 || row_begin + row_count > node.rows())
    throw OutOfRangeError("lrcs: row window outside the node's m~ rows");
  return row_count;
}

// Data-driven estimate of sigma_max(X*): each Y_l is an m~ x q slice of
// Gaussian projections of the columns, so sigma_max(Y_l) / sqrt(m~)
// concentrates at or above sigma_max(X*).
double estimate_sigma_max_from_measurements(const LrcsInstance& instance) {
  double best = 0.0;
  for (const auto& node : instance.nodes)
    best = std::max(best, spectral_norm(node.y));
  return best / std::sqrt(static_cast<double>(instance.m_tilde));
}

}  // namespace

LrcsGroundTruth make_lrcs_ground_truth(Eigen::Index n, Eigen::Index q, int r,
                                       std::uint64_t seed) {
  if (r < 1 || r > std::min(n, q))
    throw ConfigError("make_lrcs_ground_truth: need 1 <= r <= min(n, q)");
  Rng rng(derive_seed(seed, kTruthTag));
  Matrix u = orthonormalize(gaussian_matrix(n, r, rng)).columns();
  Matrix b = gaussian_matrix(r, q, rng);
  return make_lrcs_ground_truth_from(std::move(u), std::move(b));
}

LrcsGroundTruth make_lrcs_ground_truth_from(Matrix u_star, Matrix b_star) {
  if (u_star.cols() != b_star.rows())
    throw DimensionMismatchError("make_lrcs_ground_truth_from: inner dimensions differ");
  LrcsGroundTruth truth;
  truth.u_star = std::move(u_star);
  truth.b_star = std::move(b_star);
  truth.x_star = truth.u_star * truth.b_star;
  fill_spectrum_stats(truth);
  return truth;
}

LrcsInstance sample_lrcs_measurements(const LrcsGroundTruth& truth, int m, int num_nodes,
                                      std::uint64_t seed) {
  const Eigen::Index n = truth.u_star.rows();
  const Eigen::Index q = truth.b_star.cols();
  if (num_nodes < 1 || m % num_nodes != 0)
    throw IndivisibleSplitError("sample_lrcs_measurements: num_nodes must divide m");
  const int m_tilde = m / num_nodes;

  LrcsInstance instance;
  instance.n = n;
  instance.q = q;
  instance.r = static_cast<int>(truth.b_star.rows());
  instance.m = m;
  instance.num_nodes = num_nodes;
  instance.m_tilde = m_tilde;
  instance.truth = truth;
  instance.seed = seed;
  instance.nodes.resize(num_nodes);
  for (auto& node : instance.nodes) {
    node.a.reserve(q);
    node.y.resize(m_tilde, q);
  }

  Rng rng(derive_seed(seed, kMeasTag));
  for (Eigen::Index k = 0; k < q; ++k) {
    const Matrix a_k = gaussian_matrix(m, n, rng);
    const Vector y_k = a_k * truth.x_star.col(k);
    for (int l = 0; l < num_nodes; ++l) {
      instance.nodes[l].a.push_back(a_k.middleRows(l * m_tilde, m_tilde));
      instance.nodes[l].y.col(k) = y_k.segment(l * m_tilde, m_tilde);
    }
  }
  return instance;
}

LrcsInstance generate_lrcs_instance(Eigen::Index n, Eigen::Index q, int r, int m,
                                    int num_nodes, std::uint64_t seed) {
  const LrcsGroundTruth truth = make_lrcs_ground_truth(n, q, r, seed);
  return sample_lrcs_measurements(truth, m, num_nodes, seed);
}

Vector truncate_measurements(const Vector& y, double alpha) {
  if (alpha < 0.0) throw ConfigError("truncate_measurements: alpha must be nonnegative");
  Vector out = y;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (out(i) * out(i) > alpha) out(i) = 0.0;
  return out;
}

double node_alpha(const LrcsNodeData& node, double c_tilde) {
  if (node.y.size() == 0) throw EmptyInputError("node_alpha: node has no measurements");
  const double m_tilde = static_cast<double>(node.rows());
  const double q = static_cast<double>(node.columns());
  return c_tilde * node.y.squaredNorm() / (m_tilde * q);
}

Matrix init_matrix_node(const LrcsNodeData& node, double alpha) {
  const Eigen::Index q = node.columns();
  if (q == 0 || node.a.size() != static_cast<std::size_t>(q))
    throw DimensionMismatchError("init_matrix_node: sensing blocks and measurements differ");
  const Eigen::Index n = node.a.front().cols();
  Matrix x0(n, q);
  for (Eigen::Index k = 0; k < q; ++k)
    x0.col(k) = node.a[k].transpose() * truncate_measurements(node.y.col(k), alpha);
  return x0;
}

double default_c_tilde(const LrcsInstance& instance) {
  const double mu = 2.0;  // take mu >= 2 when the true incoherence is unknown
  return 9.0 * instance.truth.kappa * instance.truth.kappa * mu * mu;
}

double default_eta(const LrcsInstance& instance) {
  const double s = instance.truth.sigma_max;
  if (!(s > 0.0)) throw ConfigError("default_eta: ground truth has zero spectrum");
  return 0.5 / (s * s);
}

double default_gradient_omega(const LrcsInstance& instance, const GdConfig& cfg,
                              double delta0) {
  const int batches = cfg.minibatches > 0 ? cfg.minibatches : 1;
  const int rho = instance.num_nodes / batches;
  const double sigma_hat = estimate_sigma_max_from_measurements(instance);
  Eigen::Index rows = instance.m_tilde;
  if (cfg.sample_splitting && cfg.iterations > 0) rows = instance.m_tilde / cfg.iterations;
  return static_cast<double>(rho) * static_cast<double>(rows) * 14.0 *
         std::sqrt(static_cast<double>(instance.r)) * delta0 * sigma_hat;
}

double default_gradient_omega(const LrcsInstance& instance, const GdConfig& cfg) {
  // delta0 must cover the worst initialization error the filter can see, not
  // just the theory's 0.1/kappa^2 basin: spectral init at experiment scale
  // lands near SD_F ~ 1, so the threshold is anchored there.
  const double delta0 = 1.0;
  return default_gradient_omega(instance, cfg, delta0);
}

LsResult ls_step(const BasisMatrix& u, const LrcsNodeData& node, Eigen::Index row_begin,
                 Eigen::Index row_count) {
  const Eigen::Index rows = resolve_rows(node, row_begin, row_count);
  const Eigen::Index q = node.columns();
  const Eigen::Index r = u.rank();
  LsResult out;
  out.b.resize(r, q);
  for (Eigen::Index k = 0; k < q; ++k) {
    const Matrix design = node.a[k].middleRows(row_begin, rows) * u.columns();
    Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(svd.singularValues().size() - 1) < kLsSingularFloor)
      throw IllConditionedError("ls_step: (A_k U) numerically rank-deficient at column " +
                                std::to_string(k));
    out.b.col(k) = svd.solve(node.y.col(k).segment(row_begin, rows));
  }
  out.x = u.columns() * out.b;
  return out;
}

Matrix node_gradient(const BasisMatrix& u, const Matrix& b, const LrcsNodeData& node,
                     Eigen::Index row_begin, Eigen::Index row_count) {
  const Eigen::Index rows = resolve_rows(node, row_begin, row_count);
  const Eigen::Index q = node.columns();
  if (b.cols() != q || b.rows() != u.rank())
    throw DimensionMismatchError("node_gradient: coefficient shape mismatch");
  Matrix grad = Matrix::Zero(u.ambient_dim(), u.rank());
  for (Eigen::Index k = 0; k < q; ++k) {
    const auto a_k = node.a[k].middleRows(row_begin, rows);
    const Vector residual = a_k * (u.columns() * b.col(k)) - node.y.col(k).segment(row_begin, rows);
    grad.noalias() += (a_k.transpose() * residual) * b.col(k).transpose();
  }
  return grad;
}

namespace {

// Shared by both init variants: the scalar threshold round, and the per-node
// backprojection matrices for the round's good nodes.
struct InitCommon {
  double alpha = 0.0;
  std::vector<int> byz;
  std::vector<Matrix> x0;  // empty matrix for byzantine nodes
};

InitCommon init_common(const LrcsInstance& instance, const InitConfig& cfg,
                       const FederationConfig& fed, const Adversary& scalar_adversary,
                       bool batch_mean_alpha) {
  fed.validate();
  if (fed.num_nodes != instance.num_nodes)
    throw ConfigError("spectral init: federation and instance node counts differ");
  const double c_tilde = cfg.c_tilde > 0.0 ? cfg.c_tilde : default_c_tilde(instance);

  InitCommon common;
  common.byz = byzantine_set_schedule(fed, ScheduleMode::Fixed, 0);

  const CenterState state{Matrix(), 0};
  const HonestCompute honest = [&](int id) -> PayloadContent {
    return node_alpha(instance.nodes[id - 1], c_tilde);
  };
  const auto transcript = run_round(fed, state, honest, scalar_adversary);

  std::vector<double> alphas;
  if (batch_mean_alpha) {
    const int batches = cfg.minibatches;
    const int rho = fed.num_nodes / batches;
    for (int theta = 1; theta <= batches; ++theta) {
      double sum = 0.0;
      for (int ell = 1; ell <= rho; ++ell)
        sum += std::get<double>(
            transcript[minibatch_index(theta, ell, rho, batches) - 1].content);
      alphas.push_back(sum / rho);
    }
  } else {
    for (const auto& p : transcript) alphas.push_back(std::get<double>(p.content));
  }
  common.alpha = scalar_median(alphas);

  common.x0.resize(instance.num_nodes);
  for (int l = 0; l < instance.num_nodes; ++l) {
    if (std::binary_search(common.byz.begin(), common.byz.end(), l + 1)) continue;
    common.x0[l] = init_matrix_node(instance.nodes[l], common.alpha);
  }
  return common;
}

std::vector<double> node_sdf_diagnostics(const LrcsInstance& instance,
                                         const std::vector<Matrix>& bases) {
  std::vector<double> out;
  const BasisMatrix u_star{instance.truth.u_star};
  for (const auto& b : bases)
    out.push_back(sd_f(u_star, orthonormalize_or_complete(b)));
  return out;
}

}  // namespace

SpectralInitResult spectral_init_median(const LrcsInstance& instance, const InitConfig& cfg,
                                        const FederationConfig& fed,
                                        const Adversary& scalar_adversary,
                                        const Adversary& matrix_adversary,
                                        std::uint64_t seed) {
  InitCommon common = init_common(instance, cfg, fed, scalar_adversary, false);

  PowerMethodConfig pm;
  pm.rank = instance.r;
  pm.iterations = cfg.t_pow;
  pm.seed = u_rand_stream(seed);

  const CenterState state{Matrix(), 1};
  const HonestCompute honest = [&](int id) -> PayloadContent {
    return topr_left_singular(common.x0[id - 1], pm).columns();
  };
  const auto transcript = run_round(fed, state, honest, matrix_adversary);

  std::vector<Matrix> bases;
  bases.reserve(transcript.size());
  for (const auto& p : transcript) bases.push_back(std::get<Matrix>(p.content));

  EstimatorConfig est;
  est.rank = instance.r;
  est.t_pow = cfg.t_pow;
  est.t_gm = cfg.t_gm;
  SpectralInitResult result{subspace_median(bases, est, seed), common.alpha,
                            node_sdf_diagnostics(instance, bases)};
  return result;
}

SpectralInitResult spectral_init_mom(const LrcsInstance& instance, const InitConfig& cfg,
                                     const FederationConfig& fed,
                                     const Adversary& scalar_adversary,
                                     const Adversary& matrix_adversary,
                                     std::uint64_t seed) {
  if (cfg.minibatches < 1 || instance.num_nodes % cfg.minibatches != 0)
    throw ConfigError("spectral_init_mom: minibatches must divide the node count");
  const int batches = cfg.minibatches;
  const int rho = instance.num_nodes / batches;
  InitCommon common = init_common(instance, cfg, fed, scalar_adversary, true);

  const Eigen::Index n = instance.n;
  const int r = instance.r;
  std::vector<Matrix> batch_u(batches, u_rand(n, r, seed));

  for (int t = 0; t < cfg.t_pow; ++t) {
    // First exchange: V_l = X0_l^T U_(theta), summed per batch at the center.
    const CenterState v_state{Matrix(), 1 + 2 * t};
    const HonestCompute v_honest = [&](int id) -> PayloadContent {
      const int theta = (id - 1) / rho;
      return Matrix(common.x0[id - 1].transpose() * batch_u[theta]);
    };
    const auto v_transcript = run_round(fed, v_state, v_honest, matrix_adversary);
    std::vector<Matrix> batch_v(batches, Matrix::Zero(instance.q, r));
    for (int theta = 0; theta < batches; ++theta)
      for (int ell = 1; ell <= rho; ++ell)
        batch_v[theta] +=
            std::get<Matrix>(v_transcript[minibatch_index(theta + 1, ell, rho, batches) - 1].content);

    // Second exchange: U_l = X0_l V_(theta), summed and orthonormalized per batch.
    const CenterState u_state{Matrix(), 2 + 2 * t};
    const HonestCompute u_honest = [&](int id) -> PayloadContent {
      const int theta = (id - 1) / rho;
      return Matrix(common.x0[id - 1] * batch_v[theta]);
    };
    const auto u_transcript = run_round(fed, u_state, u_honest, matrix_adversary);
    for (int theta = 0; theta < batches; ++theta) {
      Matrix sum = Matrix::Zero(n, r);
      for (int ell = 1; ell <= rho; ++ell)
        sum += std::get<Matrix>(
            u_transcript[minibatch_index(theta + 1, ell, rho, batches) - 1].content);
      batch_u[theta] = orthonormalize_or_complete(sum).columns();
    }
  }

  if (batches == 1) {
    // Degenerate pooling: the single federated power method IS the estimate,
    // which is exactly the attack-free centralized initialization.
    SpectralInitResult result{
        SubspaceEstimate{BasisMatrix(batch_u[0]), 1, 0.0, cfg.t_pow + 1}, common.alpha,
        node_sdf_diagnostics(instance, batch_u)};
    return result;
  }
  EstimatorConfig est;
  est.rank = r;
  est.t_pow = cfg.t_pow;
  est.t_gm = cfg.t_gm;
  SpectralInitResult result{subspace_median(batch_u, est, seed), common.alpha,
                            node_sdf_diagnostics(instance, batch_u)};
  return result;
}

AltGdMinState make_altgdmin_state(const LrcsInstance& instance, BasisMatrix u0) {
  if (u0.ambient_dim() != instance.n || u0.rank() != instance.r)
    throw DimensionMismatchError("make_altgdmin_state: basis shape mismatch");
  AltGdMinState state{std::move(u0), {}, {}, 0, 0};
  state.node_b.resize(instance.num_nodes);
  return state;
}

AltGdMinState gd_round(AltGdMinState state, const LrcsInstance& instance, const GdConfig& cfg,
                       const FederationConfig& fed, const Adversary& adversary) {
  fed.validate();
  if (fed.num_nodes != instance.num_nodes)
    throw ConfigError("gd_round: federation and instance node counts differ");
  const int batches = cfg.minibatches > 0 ? cfg.minibatches : 1;
  if (instance.num_nodes % batches != 0)
    throw ConfigError("gd_round: minibatches must divide the node count");
  const int rho = instance.num_nodes / batches;

  Eigen::Index row_begin = 0;
  Eigen::Index rows = instance.m_tilde;
  if (cfg.sample_splitting) {
    if (cfg.iterations < 1) throw ConfigError("gd_round: sample splitting needs iterations set");
    rows = instance.m_tilde / cfg.iterations;
    if (rows < instance.r)
      throw ConfigError("gd_round: sample splitting leaves fewer than r rows per iteration");
    row_begin = state.rows_consumed;
    if (row_begin + rows > instance.m_tilde)
      throw ConfigError("gd_round: sample-splitting row budget exhausted");
  }

  const double eta = cfg.eta > 0.0 ? cfg.eta : default_eta(instance);
  const double omega = cfg.omega > 0.0 ? cfg.omega : default_gradient_omega(instance, cfg);

  // Every node's local least squares and gradient; Byzantine nodes corrupt only
  // what they send.
  std::vector<Matrix> gradients(instance.num_nodes);
  for (int l = 0; l < instance.num_nodes; ++l) {
    LsResult ls = ls_step(state.u, instance.nodes[l], row_begin, rows);
    gradients[l] = node_gradient(state.u, ls.b, instance.nodes[l], row_begin, rows);
    state.node_b[l] = std::move(ls.b);
  }

  const CenterState center{state.u.columns(), state.iterations_done};
  const HonestCompute honest = [&](int id) -> PayloadContent { return gradients[id - 1]; };
  const auto transcript = run_round(fed, center, honest, adversary);

  std::vector<Vector> batch_sums;
  batch_sums.reserve(batches);
  for (int theta = 1; theta <= batches; ++theta) {
    Matrix sum = Matrix::Zero(instance.n, instance.r);
    for (int ell = 1; ell <= rho; ++ell)
      sum += std::get<Matrix>(transcript[minibatch_index(theta, ell, rho, batches) - 1].content);
    batch_sums.push_back(vectorize(sum));
  }

  GmConfig gm;
  gm.max_iterations = cfg.t_gm;
  const GmResult gm_result = thresholded_gm(batch_sums, omega, gm);
  const Matrix grad_gm = unvectorize(gm_result.point, instance.n, instance.r);

  const double step = eta / (static_cast<double>(rho) * static_cast<double>(rows));
  state.u = orthonormalize(state.u.columns() - step * grad_gm);
  state.iterations_done += 1;
  state.rows_consumed = cfg.sample_splitting ? row_begin + rows : instance.m_tilde;
  state.error_trace.push_back(sd_f(BasisMatrix{instance.truth.u_star}, state.u));
  state.filtered_trace.push_back(gm_result.filtered_count);
  return state;
}

AltGdMinResult byz_altgdmin(const LrcsInstance& instance, const InitConfig& init_cfg,
                            const GdConfig& gd_cfg, const FederationConfig& fed,
                            const Adversary& scalar_adversary,
                            const Adversary& matrix_adversary, InitMode init_mode,
                            std::uint64_t seed) {
  SpectralInitResult init =
      init_mode == InitMode::Median
          ? spectral_init_median(instance, init_cfg, fed, scalar_adversary, matrix_adversary,
                                 seed)
          : spectral_init_mom(instance, init_cfg, fed, scalar_adversary, matrix_adversary,
                              seed);

  const double sqrt_r = std::sqrt(static_cast<double>(instance.r));
  const BasisMatrix u_star{instance.truth.u_star};

  AltGdMinResult result{make_altgdmin_state(instance, init.estimate.basis), std::move(init),
                        {}, 0.0};
  result.error_trace.push_back(sd_f(u_star, result.state.u) / sqrt_r);

  for (int t = 0; t < gd_cfg.iterations; ++t) {
    result.state = gd_round(std::move(result.state), instance, gd_cfg, fed, matrix_adversary);
    const double err = result.state.error_trace.back() / sqrt_r;
    result.error_trace.push_back(err);
    if (gd_cfg.eps_exit > 0.0 && err < gd_cfg.eps_exit) break;
  }

  // Final per-column errors from a fresh least-squares pass at U_T.
  double max_col_err = 0.0;
  for (int l = 0; l < instance.num_nodes; ++l) {
    const LsResult ls = ls_step(result.state.u, instance.nodes[l]);
    for (Eigen::Index k = 0; k < instance.q; ++k) {
      const double denom = instance.truth.x_star.col(k).norm();
      if (denom == 0.0) continue;
      max_col_err =
          std::max(max_col_err, (ls.x.col(k) - instance.truth.x_star.col(k)).norm() / denom);
    }
  }
  result.max_column_error = max_col_err;
  return result;
}

}  // namespace byzfed
