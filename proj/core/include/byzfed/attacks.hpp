#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "byzfed/fed_sim.hpp"

namespace byzfed {

enum class AttackKind { None, Orthogonal, Ones, Alternating, ReverseGradient };

AttackKind attack_kind_from_string(const std::string& name);
std::string to_string(AttackKind kind);

struct AttackParams {
  double c_attack = 1.0;        // entry scale for ones/alternating; corrupted scalar payload
  double omega = 1.0;           // norm budget for the orthogonal attack
  double rev_multiplier = 10.0; // C in the reverse-gradient attack
};

/// Entry scale that keeps an all-constant n x r payload just under a
/// Frobenius-norm-omega filter: 0.9 * omega / sqrt(n r).
inline double attack_entry_scale(double omega, Eigen::Index n, Eigen::Index r) {
  return 0.9 * omega / std::sqrt(static_cast<double>(n) * static_cast<double>(r));
}

/// Basis orthogonal to the span of the honest aggregate, scaled to Frobenius
/// norm omega: orthonormalize the aggregate, project out its span, QR the
/// complement and keep the leading r directions. Requires r <= n - r.
Matrix orthogonal_attack(const Matrix& honest_aggregate, double omega, std::uint64_t seed);

/// All entries equal to -c_attack.
Matrix ones_attack(Eigen::Index n, Eigen::Index r, double c_attack);

/// Checkerboard c_attack * (-1)^(i+j).
Matrix alternating_attack(Eigen::Index n, Eigen::Index r, double c_attack);

/// -c times the empirical mean of the given gradients.
Matrix reverse_gradient_attack(const std::vector<Matrix>& honest_gradients, double c);

/// Adversary for rounds whose payloads are matrices: every Byzantine node
/// sends the same colluded payload built from the round's honest transcript.
Adversary make_matrix_adversary(AttackKind kind, const AttackParams& params);

/// Worst-case adversary for rounds the center aggregates by per-minibatch
/// sums: the first Byzantine member of each batch sends
/// (attack target - the batch's honest sum), steering the whole batch
/// aggregate to the target exactly; other Byzantine members of the batch send
/// zero. Corrupted batches then collude on identical aggregates.
Adversary make_batch_steering_adversary(AttackKind kind, const AttackParams& params,
                                        int num_nodes, int minibatches);

/// Adversary for scalar rounds (the LRCS truncation-threshold exchange): each
/// Byzantine node reports c_attack.
Adversary make_scalar_adversary(const AttackParams& params);

}  // namespace byzfed
