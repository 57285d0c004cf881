#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "byzfed/errors.hpp"

namespace byzfed {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tall matrix with mutually orthonormal columns, representing the subspace
/// spanned by them. Construction validates ||U^T U - I||_F <= 1e-10 and r <= n.
class BasisMatrix {
public:
  explicit BasisMatrix(Matrix columns);

  const Matrix& columns() const { return columns_; }
  Eigen::Index ambient_dim() const { return columns_.rows(); }
  Eigen::Index rank() const { return columns_.cols(); }

private:
  Matrix columns_;
};

/// Symmetric idempotent matrix P = U U^T projecting onto span(U).
/// Instances are produced by projection() and satisfy the projector identities
/// by construction; validate() recomputes them for verification.
class ProjectionMatrix {
public:
  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  Eigen::Index subspace_rank() const { return rank_; }

  /// True iff symmetry (1e-10), idempotence (1e-8), trace==rank (1e-8) and
  /// ||P||_F <= sqrt(rank) all hold.
  bool validate() const;

private:
  friend ProjectionMatrix projection(const BasisMatrix&);
  ProjectionMatrix(Matrix m, Eigen::Index rank) : matrix_(std::move(m)), rank_(rank) {}

  Matrix matrix_;
  Eigen::Index rank_;
};

struct PowerMethodConfig {
  int rank = 1;                 // r
  int iterations = 10;          // T_pow
  std::uint64_t seed = 0;
  double early_exit_tol = 0.0;  // 0 disables; stop once successive iterates are this close in SD_F
};

using LinearOperator = std::function<Matrix(const Matrix&)>;

/// QR orthonormalization of the columns of m, with the sign convention that
/// the diagonal of R is non-negative (makes repeated runs reproducible).
/// Throws RankDeficientError when the smallest singular value of m is below
/// 1e-12 times the largest.
BasisMatrix orthonormalize(const Matrix& m);

/// QR factor of m with rank-deficient inputs tolerated: columns of m beyond
/// its numerical rank are completed with the orthonormal directions the
/// Householder factorization produces. Mirrors what a plain qr() call gives a
/// center that must accept arbitrary payloads.
BasisMatrix orthonormalize_or_complete(const Matrix& m);

/// Orthonormal basis of range(m) with the column count truncated to the
/// numerical rank (column-pivoted QR, relative pivot threshold rel_tol).
BasisMatrix orth_truncated(const Matrix& m, double rel_tol = 1e-12);

ProjectionMatrix projection(const BasisMatrix& u);

/// SD_F(U1, U2) = ||(I - U1 U1^T) U2||_F. Zero iff span(U2) is contained in
/// span(U1); at most sqrt(rank(U2)).
double sd_f(const BasisMatrix& u1, const BasisMatrix& u2);

/// SD_2(U1, U2) = ||(I - U1 U1^T) U2||_2, in [0, 1].
double sd_2(const BasisMatrix& u1, const BasisMatrix& u2);

/// Power method for the top-r eigenspace of a symmetric PSD operator on R^dim:
/// start from an i.i.d. Gaussian matrix seeded by cfg.seed and iterate
/// U <- QR(apply(U)) for cfg.iterations rounds.
BasisMatrix power_method_topr(const LinearOperator& apply, Eigen::Index dim,
                              const PowerMethodConfig& cfg);

/// Top-r left singular vectors of d, computed by running power_method_topr on
/// v -> d (d^T v) without forming d d^T.
BasisMatrix topr_left_singular(const Matrix& d, const PowerMethodConfig& cfg);

/// Dense eigendecomposition path: exact top-r eigenvectors of a symmetric
/// matrix. Test oracles use this; the power method is the production path.
BasisMatrix topr_eigenvectors_dense(const Matrix& phi, int r);

/// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace byzfed
