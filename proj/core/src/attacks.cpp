#include "byzfed/attacks.hpp"

namespace byzfed {

AttackKind attack_kind_from_string(const std::string& name) {
  if (name == "none") return AttackKind::None;
  if (name == "orthogonal") return AttackKind::Orthogonal;
  if (name == "ones") return AttackKind::Ones;
  if (name == "alternating") return AttackKind::Alternating;
  if (name == "reverse_gradient") return AttackKind::ReverseGradient;
  throw ConfigError("unknown attack kind: " + name);
}

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::None: return "none";
    case AttackKind::Orthogonal: return "orthogonal";
    case AttackKind::Ones: return "ones";
    case AttackKind::Alternating: return "alternating";
    case AttackKind::ReverseGradient: return "reverse_gradient";
  }
  return "unknown";
}

namespace {

// r directions orthogonal to span(spanned), Frobenius norm omega. The tiny
// shave keeps the payload under a strict > omega filter.
Matrix complement_payload(const BasisMatrix& spanned, Eigen::Index r, double omega) {
  const Eigen::Index n = spanned.ambient_dim();
  if (r > n - spanned.rank())
    throw RankDeficientError("orthogonal_attack: complement has fewer than r directions");
  const Matrix complement_projector =
      Matrix::Identity(n, n) - spanned.columns() * spanned.columns().transpose();
  // Column-pivoted QR keeps the leading Q columns inside range(complement).
  Eigen::ColPivHouseholderQR<Matrix> qr(complement_projector);
  Matrix attack = qr.householderQ() * Matrix::Identity(n, r);
  attack *= omega * (1.0 - 1e-11) / attack.norm();
  return attack;
}

}  // namespace

Matrix orthogonal_attack(const Matrix& honest_aggregate, double omega,
                         [[maybe_unused]] std::uint64_t seed) {
  const Eigen::Index n = honest_aggregate.rows();
  const Eigen::Index r = honest_aggregate.cols();
  if (r > n - r)
    throw RankDeficientError("orthogonal_attack: complement has fewer than r directions");
  return complement_payload(orthonormalize(honest_aggregate), r, omega);
}

Matrix ones_attack(Eigen::Index n, Eigen::Index r, double c_attack) {
  if (c_attack <= 0.0) throw ConfigError("ones_attack: c_attack must be positive");
  return Matrix::Constant(n, r, -c_attack);
}

Matrix alternating_attack(Eigen::Index n, Eigen::Index r, double c_attack) {
  if (c_attack <= 0.0) throw ConfigError("alternating_attack: c_attack must be positive");
  Matrix m(n, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      m(i, j) = ((i + j) % 2 == 0) ? c_attack : -c_attack;
  return m;
}

Matrix reverse_gradient_attack(const std::vector<Matrix>& honest_gradients, double c) {
  if (honest_gradients.empty())
    throw EmptyInputError("reverse_gradient_attack: no gradients given");
  Matrix mean = Matrix::Zero(honest_gradients.front().rows(), honest_gradients.front().cols());
  for (const auto& g : honest_gradients) {
    if (g.rows() != mean.rows() || g.cols() != mean.cols())
      throw DimensionMismatchError("reverse_gradient_attack: gradient shapes differ");
    mean += g;
  }
  mean /= static_cast<double>(honest_gradients.size());
  return -c * mean;
}

namespace {

std::vector<Matrix> honest_matrices(const AdversaryView& view) {
  std::vector<Matrix> out;
  out.reserve(view.honest_payloads.size());
  for (const auto& p : view.honest_payloads) {
    if (!std::holds_alternative<Matrix>(p.content))
      throw DimensionMismatchError("matrix adversary used on a scalar round");
    out.push_back(std::get<Matrix>(p.content));
  }
  if (out.empty())
    throw EmptyInputError("matrix adversary: round has no honest payloads");
  return out;
}

Matrix collusion_target(AttackKind kind, const AttackParams& params,
                        const std::vector<Matrix>& honest, std::uint64_t seed) {
  const Eigen::Index n = honest.front().rows();
  const Eigen::Index r = honest.front().cols();
  switch (kind) {
    case AttackKind::Orthogonal: {
      Matrix aggregate = Matrix::Zero(n, r);
      for (const auto& m : honest) aggregate += m;
      // Rank-truncated span: mid-run aggregates of a resilient power method
      // can be numerically rank-deficient, and the attack only needs the
      // directions the aggregate actually spans.
      return complement_payload(orth_truncated(aggregate), r, params.omega);
    }
    case AttackKind::Ones:
      return ones_attack(n, r, params.c_attack);
    case AttackKind::Alternating:
      return alternating_attack(n, r, params.c_attack);
    case AttackKind::ReverseGradient:
      return reverse_gradient_attack(honest, params.rev_multiplier);
    case AttackKind::None:
      break;
  }
  throw ConfigError("collusion_target: attack kind carries no payload");
  (void)seed;
}

}  // namespace

Adversary make_matrix_adversary(AttackKind kind, const AttackParams& params) {
  if (kind == AttackKind::None) return no_adversary();
  return [kind, params](const AdversaryView& view) -> std::vector<PayloadContent> {
    const std::vector<Matrix> honest = honest_matrices(view);
    const Matrix payload = collusion_target(kind, params, honest, view.seed);
    return std::vector<PayloadContent>(view.byzantine_ids.size(), PayloadContent(payload));
  };
}

Adversary make_batch_steering_adversary(AttackKind kind, const AttackParams& params,
                                        int num_nodes, int minibatches) {
  if (kind == AttackKind::None) return no_adversary();
  if (minibatches < 1 || num_nodes % minibatches != 0)
    throw ConfigError("make_batch_steering_adversary: minibatches must divide num_nodes");
  const int rho = num_nodes / minibatches;
  return [kind, params, rho,
          minibatches](const AdversaryView& view) -> std::vector<PayloadContent> {
    const std::vector<Matrix> honest = honest_matrices(view);
    const Eigen::Index n = honest.front().rows();
    const Eigen::Index r = honest.front().cols();
    // Steer onto the orthonormalized payload: the center's QR of the steered
    // aggregate then reproduces it exactly, so all corrupted batches deliver
    // the same subspace. Steering onto a rank-deficient raw payload would
    // instead leave each batch output polluted by cancellation noise.
    const Matrix target =
        orthonormalize_or_complete(collusion_target(kind, params, honest, view.seed))
            .columns();

    std::vector<Matrix> batch_honest_sum(minibatches, Matrix::Zero(n, r));
    for (const auto& p : view.honest_payloads)
      batch_honest_sum[(p.node_id - 1) / rho] += std::get<Matrix>(p.content);

    std::vector<PayloadContent> out;
    out.reserve(view.byzantine_ids.size());
    std::vector<bool> steered(minibatches, false);
    for (int id : view.byzantine_ids) {
      const int theta = (id - 1) / rho;
      if (steered[theta]) {
        out.emplace_back(Matrix::Zero(n, r));
      } else {
        out.emplace_back(Matrix(target - batch_honest_sum[theta]));
        steered[theta] = true;
      }
    }
    return out;
  };
}

Adversary make_scalar_adversary(const AttackParams& params) {
  return [params](const AdversaryView& view) -> std::vector<PayloadContent> {
    return std::vector<PayloadContent>(view.byzantine_ids.size(),
                                       PayloadContent(params.c_attack));
  };
}

}  // namespace byzfed
