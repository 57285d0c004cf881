#include <doctest.h>

#include "byzfed/attacks.hpp"
#include "byzfed/estimators.hpp"
#include "byzfed/rng.hpp"
#include "test_support.hpp"

using namespace byzfed;
using testsupport::random_basis;
using testsupport::random_orthogonal;

namespace {

EstimatorConfig est_config(int r, int t_pow = 10, int t_gm = 10) {
  EstimatorConfig cfg;
  cfg.rank = r;
  cfg.t_pow = t_pow;
  cfg.t_gm = t_gm;
  return cfg;
}

// Node operators sharing one symmetric PSD matrix.
std::vector<NodeOperator> shared_operators(const Matrix& phi, int count) {
  std::vector<NodeOperator> ops;
  for (int l = 0; l < count; ++l)
    ops.push_back([&phi](const Matrix& u) -> Matrix { return phi * u; });
  return ops;
}

FederationConfig fed_of(int l, std::vector<int> byz, int batches = 1) {
  FederationConfig fed;
  fed.num_nodes = l;
  fed.byzantine_ids = std::move(byz);
  fed.minibatches = batches;
  fed.seed = 13;
  return fed;
}

}  // namespace

TEST_SUITE_BEGIN("estimators");

TEST_CASE("subspace_median of a shared subspace returns it") {
  const BasisMatrix u = random_basis(10, 3, 1);
  std::vector<Matrix> bases;
  for (std::uint64_t s = 0; s < 4; ++s)
    bases.push_back(u.columns() * random_orthogonal(3, 50 + s));
  const SubspaceEstimate out = subspace_median(bases, est_config(3));
  CHECK(sd_f(u, out.basis) < 1e-8);
  CHECK(out.best_node.has_value());
}

TEST_CASE("subspace_median prefers the duplicated subspace over an orthogonal one") {
  const Eigen::Index n = 12;
  const BasisMatrix good = random_basis(n, 2, 3);
  // A basis inside the orthogonal complement of the good span.
  const Matrix complement =
      orthogonal_attack(good.columns(), std::sqrt(2.0), 0);
  std::vector<Matrix> bases = {good.columns(), good.columns() * random_orthogonal(2, 4),
                               complement};
  const SubspaceEstimate out = subspace_median(bases, est_config(2));
  CHECK(sd_f(good, out.basis) < 1e-8);
  REQUIRE(out.best_node.has_value());
  CHECK(*out.best_node <= 2);
}

TEST_CASE("subspace_median error stays within 23x the good-node error") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Eigen::Index n = 20;
    const int r = 3;
    const BasisMatrix u_star = random_basis(n, r, 700 + s);
    Rng rng(800 + s);
    std::vector<Matrix> bases;
    double delta = 0.0;
    for (int l = 0; l < 4; ++l) {
      const Matrix noisy = u_star.columns() + 0.03 * gaussian_matrix(n, r, rng);
      const BasisMatrix b = orthonormalize(noisy);
      delta = std::max(delta, sd_f(u_star, b));
      bases.push_back(b.columns());
    }
    bases.push_back(gaussian_matrix(n, r, rng));  // the corrupted payload
    const SubspaceEstimate out = subspace_median(bases, est_config(r, 10, 200));
    CHECK(sd_f(u_star, out.basis) <= 23.0 * delta);
  }
}

TEST_CASE("subspace_median is invariant to basis rotations") {
  std::vector<Matrix> bases;
  for (std::uint64_t s = 0; s < 5; ++s) bases.push_back(random_basis(9, 2, 20 + s).columns());
  const SubspaceEstimate a = subspace_median(bases, est_config(2));
  bases[2] = bases[2] * random_orthogonal(2, 99);
  const SubspaceEstimate b = subspace_median(bases, est_config(2));
  CHECK(sd_f(a.basis, b.basis) <= 1e-8);
}

TEST_CASE("subspace_median gm_residual is the minimum projector distance") {
  std::vector<Matrix> bases;
  for (std::uint64_t s = 0; s < 4; ++s) bases.push_back(random_basis(8, 2, 30 + s).columns());
  const EstimatorConfig cfg = est_config(2);
  const SubspaceEstimate out = subspace_median(bases, cfg);

  // Recompute the GM over the vectorized projectors with the same settings.
  std::vector<Vector> projections;
  for (const auto& b : bases)
    projections.push_back(vectorize(projection(orthonormalize(b)).matrix()));
  GmConfig gm;
  gm.max_iterations = cfg.t_gm;
  const GmResult ref = weiszfeld_gm(projections, gm);
  double min_residual = std::numeric_limits<double>::infinity();
  for (const auto& p : projections)
    min_residual = std::min(min_residual, (p - ref.point).norm());
  CHECK(out.gm_residual == doctest::Approx(min_residual).epsilon(1e-12));
}

TEST_CASE("subspace_median salvages payloads that fail QR") {
  const BasisMatrix good = random_basis(10, 2, 41);
  std::vector<Matrix> bases = {good.columns(), good.columns(), Matrix::Zero(10, 2)};
  const SubspaceEstimate out = subspace_median(bases, est_config(2));
  CHECK(sd_f(good, out.basis) < 1e-8);
}

TEST_CASE("subspace_median requires at least two equally shaped inputs") {
  CHECK_THROWS_AS(subspace_median({Matrix::Identity(4, 2)}, est_config(2)), ConfigError);
  CHECK_THROWS_AS(
      subspace_median({Matrix::Identity(4, 2), Matrix::Identity(5, 2)}, est_config(2)),
      DimensionMismatchError);
}

TEST_CASE("res_pow_meth with identical honest nodes matches the plain power method") {
  Rng rng(51);
  const Matrix g = gaussian_matrix(10, 10, rng);
  const Matrix phi = g * g.transpose() / 10.0;
  EstimatorConfig cfg = est_config(2, 12);
  cfg.omega = 1e9;
  const SubspaceEstimate out =
      res_pow_meth(shared_operators(phi, 3), 10, cfg, fed_of(3, {}), no_adversary(), 7);

  PowerMethodConfig pm;
  pm.rank = 2;
  pm.iterations = 12;
  pm.seed = u_rand_stream(7);
  const BasisMatrix oracle =
      power_method_topr([&phi](const Matrix& x) -> Matrix { return phi * x; }, 10, pm);
  CHECK(sd_f(oracle, out.basis) < 1e-12);
  CHECK(out.rounds == 12);
}

TEST_CASE("res_pow_meth tracks the top eigenspace under small node noise") {
  const Eigen::Index n = 30;
  const int r = 3;
  const BasisMatrix u_star = random_basis(n, r, 61);
  const Matrix phi_star =
      u_star.columns() * Vector::LinSpaced(r, 5.0, 3.0).asDiagonal() *
      u_star.columns().transpose();
  Rng rng(62);
  std::vector<Matrix> phis;
  for (int l = 0; l < 3; ++l) {
    Matrix noise = gaussian_matrix(n, n, rng);
    noise = 5e-4 * ((noise + noise.transpose()) * 0.5).eval();
    phis.push_back(phi_star + noise);
  }
  std::vector<NodeOperator> ops;
  for (const auto& p : phis) ops.push_back([&p](const Matrix& u) -> Matrix { return p * u; });
  EstimatorConfig cfg = est_config(r, 50);
  cfg.omega = 1e9;
  const SubspaceEstimate out = res_pow_meth(ops, n, cfg, fed_of(3, {}), no_adversary(), 63);
  CHECK(sd_f(u_star, out.basis) < 1e-3);
}

TEST_CASE("res_pow_meth raises AllFiltered when the threshold removes every payload") {
  Rng rng(71);
  const Matrix g = gaussian_matrix(8, 8, rng);
  const Matrix phi = g * g.transpose();
  EstimatorConfig cfg = est_config(2, 3);
  cfg.omega = 1e-9;
  CHECK_THROWS_AS(
      res_pow_meth(shared_operators(phi, 3), 8, cfg, fed_of(3, {}), no_adversary(), 5),
      AllFilteredError);
}

TEST_CASE("subspace_mom with L~ = L reduces to subspace_median over node power methods") {
  const Eigen::Index n = 14;
  const int r = 2;
  Rng rng(81);
  std::vector<Matrix> phis;
  for (int l = 0; l < 4; ++l) {
    Matrix g = gaussian_matrix(n, n, rng);
    phis.push_back(g * g.transpose() / double(n));
  }
  std::vector<NodeOperator> ops;
  for (const auto& p : phis) ops.push_back([&p](const Matrix& u) -> Matrix { return p * u; });

  EstimatorConfig cfg = est_config(r, 9);
  cfg.minibatches = 4;
  const SubspaceEstimate mom =
      subspace_mom(ops, n, cfg, fed_of(4, {}, 4), no_adversary(), 17);

  PowerMethodConfig pm;
  pm.rank = r;
  pm.iterations = 9;
  pm.seed = u_rand_stream(17);
  std::vector<Matrix> node_bases;
  for (const auto& p : phis)
    node_bases.push_back(
        power_method_topr([&p](const Matrix& u) -> Matrix { return p * u; }, n, pm).columns());
  const SubspaceEstimate med = subspace_median(node_bases, est_config(r, 9), 17);
  CHECK(sd_f(mom.basis, med.basis) < 1e-12);
  CHECK(*mom.best_node == *med.best_node);
}

TEST_CASE("subspace_mom with exact rank-r nodes matches the pooled power method") {
  const Eigen::Index n = 16;
  const int r = 2;
  const BasisMatrix u_star = random_basis(n, r, 91);
  std::vector<Matrix> phis;
  for (int l = 0; l < 4; ++l) {
    Vector diag(r);
    diag << 4.0 + l, 2.0 + l;
    phis.push_back(u_star.columns() * diag.asDiagonal() * u_star.columns().transpose());
  }
  std::vector<NodeOperator> ops;
  for (const auto& p : phis) ops.push_back([&p](const Matrix& u) -> Matrix { return p * u; });
  EstimatorConfig cfg = est_config(r, 25);
  cfg.minibatches = 2;
  const SubspaceEstimate mom =
      subspace_mom(ops, n, cfg, fed_of(4, {}, 2), no_adversary(), 19);

  const SubspaceEstimate pooled =
      federated_power_method_baseline(ops, n, est_config(r, 25), 19);
  CHECK(sd_f(mom.basis, pooled.basis) < 1e-6);
}

TEST_CASE("subspace_mom breaks down when corrupted batches reach a majority") {
  const Eigen::Index n = 24;
  const int r = 2;
  const BasisMatrix u_star = random_basis(n, r, 101);
  Rng rng(102);
  std::vector<Matrix> phis;
  for (int l = 0; l < 12; ++l) {
    Matrix noise = gaussian_matrix(n, n, rng);
    noise = 0.01 * ((noise + noise.transpose()) * 0.5).eval();
    phis.push_back(u_star.columns() * Vector::LinSpaced(r, 6.0, 4.0).asDiagonal() *
                       u_star.columns().transpose() +
                   noise);
  }
  std::vector<NodeOperator> ops;
  for (const auto& p : phis) ops.push_back([&p](const Matrix& u) -> Matrix { return p * u; });

  AttackParams params;
  params.c_attack = 1e3;
  const Adversary adv = make_batch_steering_adversary(AttackKind::Ones, params, 12, 6);

  EstimatorConfig cfg = est_config(r, 15);
  cfg.minibatches = 6;
  // Four corrupted nodes spread over four of the six batches: the steered
  // batch aggregates collude, so the median of six breaks down.
  const SubspaceEstimate broken =
      subspace_mom(ops, n, cfg, fed_of(12, {1, 3, 5, 7}, 6), adv, 29);
  // With two corrupted batches of six, the median still holds.
  const SubspaceEstimate mom_ok =
      subspace_mom(ops, n, cfg, fed_of(12, {1, 3}, 6), adv, 29);

  CHECK(sd_f(u_star, broken.basis) > 0.5);
  CHECK(sd_f(u_star, mom_ok.basis) < 0.2);
}

TEST_CASE("svd_res_cov_est recovers the eigenspace of identical inputs") {
  const Eigen::Index n = 12;
  const int r = 2;
  const BasisMatrix u_star = random_basis(n, r, 111);
  Vector diag(r);
  diag << 5.0, 3.0;
  const Matrix phi =
      u_star.columns() * diag.asDiagonal() * u_star.columns().transpose();
  const SubspaceEstimate out =
      svd_res_cov_est({phi, phi, phi}, est_config(r, 100), 3);
  CHECK(sd_f(u_star, out.basis) < 1e-6);
}

TEST_CASE("svd_res_cov_est with one outlier stays within the Davis-Kahan bound") {
  const Eigen::Index n = 12;
  const int r = 2;
  const BasisMatrix u_star = random_basis(n, r, 121);
  Vector diag(r);
  diag << 6.0, 4.0;
  const Matrix phi_star =
      u_star.columns() * diag.asDiagonal() * u_star.columns().transpose();
  const double delta = 4.0;  // sigma_r - sigma_{r+1} of phi_star

  std::vector<Matrix> inputs(5, phi_star);
  Rng rng(122);
  Matrix outlier = gaussian_matrix(n, n, rng);
  inputs[3] = 10.0 * (outlier + outlier.transpose());

  GmConfig gm;
  gm.max_iterations = 400;
  const GmResult gm_result = weiszfeld_gm(vectorize_all(inputs), gm);
  const double residual = spectral_norm(unvectorize(gm_result.point, n, n) - phi_star);
  REQUIRE(residual < (1.0 - 1.0 / std::sqrt(2.0)) * delta);

  EstimatorConfig cfg = est_config(r, 200);
  cfg.t_gm = 400;
  const SubspaceEstimate out = svd_res_cov_est(inputs, cfg, 5);
  CHECK(sd_f(u_star, out.basis) <=
        2.0 * std::sqrt(double(r)) * residual / delta + 1e-6);
}

TEST_CASE("svd_res_cov_est of a single input is its plain r-SVD") {
  Rng rng(131);
  Matrix g = gaussian_matrix(10, 10, rng);
  const Matrix phi = g * g.transpose();
  const SubspaceEstimate out = svd_res_cov_est({phi}, est_config(3, 200), 7);
  const BasisMatrix oracle = topr_eigenvectors_dense(phi, 3);
  CHECK(sd_f(oracle, out.basis) < 1e-6);
}

TEST_CASE("baseline with a single node equals the plain power method") {
  Rng rng(141);
  Matrix g = gaussian_matrix(9, 9, rng);
  const Matrix phi = g * g.transpose();
  const SubspaceEstimate out = federated_power_method_baseline(
      shared_operators(phi, 1), 9, est_config(2, 15), 23);
  PowerMethodConfig pm;
  pm.rank = 2;
  pm.iterations = 15;
  pm.seed = u_rand_stream(23);
  const BasisMatrix oracle =
      power_method_topr([&phi](const Matrix& x) -> Matrix { return phi * x; }, 9, pm);
  CHECK((out.basis.columns() - oracle.columns()).norm() == 0.0);
}

TEST_CASE("zero-attack consistency: all estimators agree on identical node data") {
  const Eigen::Index n = 18;
  const int r = 2;
  Rng rng(151);
  Matrix g = gaussian_matrix(n, n, rng);
  const Matrix phi = g * g.transpose() / double(n);
  const auto ops = shared_operators(phi, 4);
  const std::uint64_t seed = 31;

  const SubspaceEstimate baseline =
      federated_power_method_baseline(ops, n, est_config(r, 10), seed);

  EstimatorConfig rp = est_config(r, 10);
  rp.omega = 1e9;
  const SubspaceEstimate respow =
      res_pow_meth(ops, n, rp, fed_of(4, {}), no_adversary(), seed);

  EstimatorConfig mom_cfg = est_config(r, 10);
  mom_cfg.minibatches = 2;
  const SubspaceEstimate mom =
      subspace_mom(ops, n, mom_cfg, fed_of(4, {}, 2), no_adversary(), seed);

  PowerMethodConfig pm;
  pm.rank = r;
  pm.iterations = 10;
  pm.seed = u_rand_stream(seed);
  std::vector<Matrix> node_bases(
      4, power_method_topr([&phi](const Matrix& x) -> Matrix { return phi * x; }, n, pm)
             .columns());
  const SubspaceEstimate med = subspace_median(node_bases, est_config(r, 10), seed);

  CHECK(sd_f(baseline.basis, respow.basis) <= 1e-8);
  CHECK(sd_f(baseline.basis, mom.basis) <= 1e-8);
  CHECK(sd_f(baseline.basis, med.basis) <= 1e-8);
}

TEST_SUITE_END();
