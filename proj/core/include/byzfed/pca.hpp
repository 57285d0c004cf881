#pragma once

#include <optional>
#include <string>
#include <vector>

#include "byzfed/linalg.hpp"

namespace byzfed {

/// Ground-truth covariance model Phi* = U*_full S_full U*_full^T.
struct PcaModel {
  Eigen::Index n = 0;
  int r = 0;
  Vector spectrum;     // size n, nonincreasing, nonnegative
  Matrix u_star_full;  // n x n orthonormal
  std::uint64_t seed = 0;

  Matrix covariance() const;       // U S U^T (dense; oracle use)
  BasisMatrix top_r() const;       // leading r columns of u_star_full
  double gap() const;              // sigma_r - sigma_{r+1}
};

/// The paper's two spectra: top r entries 15 and entry r+1 equal to 1 in both;
/// the tail is 1 - 1/n, 1 - 2/n, ... for the full-rank model and zero for the
/// rank-(r+1) one.
Vector spectrum_full_rank_15(Eigen::Index n, int r);
Vector spectrum_low_rank_15(Eigen::Index n, int r);
Vector spectrum_from_name(const std::string& name, Eigen::Index n, int r);

PcaModel generate_pca_model(Eigen::Index n, int r, const Vector& spectrum,
                            std::uint64_t seed);
PcaModel generate_pca_model(Eigen::Index n, int r, const std::string& spectrum_name,
                            std::uint64_t seed);

/// L node data matrices, each n x (q/L), columns i.i.d. N(0, Phi*).
struct PcaShards {
  std::vector<Matrix> shards;
  Eigen::Index columns_per_shard() const {
    return shards.empty() ? 0 : shards.front().cols();
  }
};

PcaShards sample_shards(const PcaModel& model, Eigen::Index q, int num_nodes,
                        std::uint64_t seed);

/// Phi_l = D D^T / q~, symmetrized.
Matrix node_covariance(const Matrix& d);

struct PcaParamEstimates {
  double sigma_r_hat = 0.0;    // max over nodes of sigma_{l,r}
  double delta_hat = 0.0;      // min over nodes of sigma_{l,r} - sigma_{l,r+1}
  double sigma_1_hat = 0.0;    // max over nodes of sigma_{l,1}
  std::optional<int> r_selected;
};

/// Per-node top singular values of Phi_l aggregated as max sigma_r, min delta,
/// max sigma_1. With select_rank, also applies the energy-threshold rule and
/// reports the largest per-node choice.
PcaParamEstimates estimate_pca_params(const PcaShards& shards, int r,
                                      bool select_rank = false,
                                      double energy_threshold = 0.9);

/// T_pow heuristic c * (sigma_r / delta) * log(n / eps), rounded up, at least 1.
int suggest_t_pow(const PcaParamEstimates& est, Eigen::Index n, double eps,
                  double c = 1.0);

/// Cheap estimate of max_l ||Phi_l||_2 by power iteration on each shard's
/// implicit covariance.
double estimate_sigma1(const PcaShards& shards, int iterations = 30,
                       std::uint64_t seed = 0);

}  // namespace byzfed
