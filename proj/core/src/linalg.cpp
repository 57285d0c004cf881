#include "byzfed/linalg.hpp"

#include <cmath>
#include <optional>

#include "byzfed/rng.hpp"

namespace byzfed {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kRankTol = 1e-12;

struct ThinQr {
  Matrix q;  // n x r, orthonormal columns
  Matrix r;  // r x r, upper triangular with non-negative diagonal
};

// Householder QR with the sign convention that diag(R) >= 0. The singular
// values of R equal those of the input, so rank checks run on the small factor.
ThinQr thin_qr_signed(const Matrix& m) {
  const Eigen::Index n = m.rows();
  const Eigen::Index r = m.cols();
  Eigen::HouseholderQR<Matrix> qr(m);
  ThinQr out;
  out.q = qr.householderQ() * Matrix::Identity(n, r);
  out.r = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < r; ++j) {
    if (out.r(j, j) < 0.0) {
      out.q.col(j) = -out.q.col(j);
      out.r.row(j) = -out.r.row(j);
    }
  }
  return out;
}

}  // namespace

BasisMatrix::BasisMatrix(Matrix columns) : columns_(std::move(columns)) {
  const Eigen::Index n = columns_.rows();
  const Eigen::Index r = columns_.cols();
  if (r > n)
    throw DimensionMismatchError("BasisMatrix: more columns than rows (" +
                                 std::to_string(r) + " > " + std::to_string(n) + ")");
  const double defect =
      (columns_.transpose() * columns_ - Matrix::Identity(r, r)).norm();
  if (!std::isfinite(defect) || defect > kOrthoTol)
    throw RankDeficientError("BasisMatrix: columns not orthonormal (defect " +
                             std::to_string(defect) + ")");
}

bool ProjectionMatrix::validate() const {
  const Eigen::Index n = matrix_.rows();
  if (matrix_.cols() != n) return false;
  if ((matrix_ - matrix_.transpose()).norm() > 1e-10) return false;
  if ((matrix_ * matrix_ - matrix_).norm() > 1e-8) return false;
  if (std::abs(matrix_.trace() - static_cast<double>(rank_)) > 1e-8) return false;
  return matrix_.norm() <= std::sqrt(static_cast<double>(rank_)) + 1e-10;
}

BasisMatrix orthonormalize(const Matrix& m) {
  if (m.rows() < m.cols())
    throw DimensionMismatchError("orthonormalize: input has more columns than rows");
  if (!m.allFinite())
    throw RankDeficientError("orthonormalize: non-finite entries in input");
  ThinQr qr = thin_qr_signed(m);
  Eigen::JacobiSVD<Matrix> svd(qr.r);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0) || sv(sv.size() - 1) <= kRankTol * sv(0))
    throw RankDeficientError("orthonormalize: numerically rank-deficient input");
  return BasisMatrix(std::move(qr.q));
}

BasisMatrix orthonormalize_or_complete(const Matrix& m) {
  if (m.rows() < m.cols())
    throw DimensionMismatchError("orthonormalize_or_complete: more columns than rows");
  // Householder Q columns are orthonormal regardless of the rank of m, except
  // when m contains non-finite entries; fall back to a canonical basis then.
  if (!m.allFinite()) {
    return BasisMatrix(Matrix::Identity(m.rows(), m.cols()));
  }
  ThinQr qr = thin_qr_signed(m);
  return BasisMatrix(std::move(qr.q));
}

BasisMatrix orth_truncated(const Matrix& m, double rel_tol) {
  if (!m.allFinite() || m.size() == 0)
    throw RankDeficientError("orth_truncated: empty or non-finite input");
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const Matrix& qrm = qr.matrixQR();
  const double pivot0 = std::abs(qrm(0, 0));
  if (!(pivot0 > 0.0)) throw RankDeficientError("orth_truncated: zero matrix");
  Eigen::Index rank = 0;
  const Eigen::Index max_rank = std::min(m.rows(), m.cols());
  while (rank < max_rank && std::abs(qrm(rank, rank)) > rel_tol * pivot0) ++rank;
  const Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
  return BasisMatrix(q);
}

ProjectionMatrix projection(const BasisMatrix& u) {
  Matrix p = u.columns() * u.columns().transpose();
  p = ((p + p.transpose()) * 0.5).eval();
  return ProjectionMatrix(std::move(p), u.rank());
}

double sd_f(const BasisMatrix& u1, const BasisMatrix& u2) {
  if (u1.ambient_dim() != u2.ambient_dim())
    throw DimensionMismatchError("sd_f: ambient dimensions differ");
  const Matrix residual =
      u2.columns() - u1.columns() * (u1.columns().transpose() * u2.columns());
  return residual.norm();
}

double sd_2(const BasisMatrix& u1, const BasisMatrix& u2) {
  if (u1.ambient_dim() != u2.ambient_dim())
    throw DimensionMismatchError("sd_2: ambient dimensions differ");
  const Matrix residual =
      u2.columns() - u1.columns() * (u1.columns().transpose() * u2.columns());
  return spectral_norm(residual);
}

BasisMatrix power_method_topr(const LinearOperator& apply, Eigen::Index dim,
                              const PowerMethodConfig& cfg) {
  if (cfg.rank < 1 || cfg.iterations < 1)
    throw ConfigError("power_method_topr: rank and iterations must be >= 1");
  if (cfg.rank > dim)
    throw DimensionMismatchError("power_method_topr: rank exceeds dimension");
  Rng rng(cfg.seed);
  Matrix iterate = gaussian_matrix(dim, cfg.rank, rng);
  std::optional<BasisMatrix> current;
  for (int t = 0; t < cfg.iterations; ++t) {
    Matrix next = apply(iterate);
    if (next.rows() != dim || next.cols() != cfg.rank)
      throw DimensionMismatchError("power_method_topr: operator changed shape");
    BasisMatrix basis = orthonormalize(next);
    if (cfg.early_exit_tol > 0.0 && current &&
        sd_f(*current, basis) < cfg.early_exit_tol) {
      current = std::move(basis);
      break;
    }
    iterate = basis.columns();
    current = std::move(basis);
  }
  return *current;
}

BasisMatrix topr_left_singular(const Matrix& d, const PowerMethodConfig& cfg) {
  if (cfg.rank > std::min(d.rows(), d.cols()))
    throw DimensionMismatchError("topr_left_singular: rank exceeds min(rows, cols)");
  const LinearOperator gram = [&d](const Matrix& x) -> Matrix {
    return d * (d.transpose() * x);
  };
  return power_method_topr(gram, d.rows(), cfg);
}

BasisMatrix topr_eigenvectors_dense(const Matrix& phi, int r) {
  if (phi.rows() != phi.cols())
    throw DimensionMismatchError("topr_eigenvectors_dense: matrix not square");
  if (r < 1 || r > phi.rows())
    throw DimensionMismatchError("topr_eigenvectors_dense: invalid rank");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(phi);
  if (eig.info() != Eigen::Success)
    throw RankDeficientError("topr_eigenvectors_dense: eigendecomposition failed");
  // Eigen orders eigenvalues ascending; take the trailing r columns, largest first.
  const Eigen::Index n = phi.rows();
  Matrix top(n, r);
  for (int j = 0; j < r; ++j) top.col(j) = eig.eigenvectors().col(n - 1 - j);
  return BasisMatrix(std::move(top));
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace byzfed
