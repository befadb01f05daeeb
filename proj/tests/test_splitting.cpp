#include "condreg/errors.hpp"
#include "condreg/splitting.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace condreg;

namespace {

PseudoLikelihoodLoss make(PseudoKind kind, const Eigen::MatrixXd& s) {
  return {kind, SymmetricMatrix(s)};
}

double fd_max_error(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega, double shift,
                    const SymmetricMatrix& linear) {
  const Eigen::MatrixXd g = smooth_gradient(loss, omega, shift, linear).matrix();
  const Eigen::Index p = omega.dim();
  const double h = 1e-6;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(p, p);
      e(i, j) = h;
      const auto plus = SymmetricMatrix::from_symmetric(omega.matrix() + 0.5 * (e + e.transpose()));
      const auto minus = SymmetricMatrix::from_symmetric(omega.matrix() - 0.5 * (e + e.transpose()));
      const double fd = (smooth_value(loss, plus, shift, linear) - smooth_value(loss, minus, shift, linear)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g(i, j)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(1.5, 1.0) == doctest::Approx(0.5));
  CHECK(soft_threshold(-0.3, 0.5) == 0.0);
  CHECK(soft_threshold(-2.0, 0.5) == doctest::Approx(-1.5));
  CHECK(soft_threshold(0.7, 0.0) == 0.7);
  CHECK_THROWS_AS(soft_threshold(1.0, -1.0), InvalidInput);
}

TEST_CASE("off-diagonal l1 prox halves the threshold") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0.4, 0.4, 1;
  const SymmetricMatrix p = prox_l1_offdiag(SymmetricMatrix(x), 0.4);
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 1) == doctest::Approx(0.2));
  CHECK(p(1, 0) == doctest::Approx(0.2));
  CHECK(prox_l1_offdiag(SymmetricMatrix(x), 0.0).matrix() == x);
  const auto diag = SymmetricMatrix::diagonal(Eigen::Vector3d(1, -2, 3));
  CHECK(prox_l1_offdiag(diag, 5.0).matrix() == diag.matrix());
  CHECK(prox_l1_offdiag(diag, 1.0, true)(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("D-trace gradient at its stationary point") {
  const PseudoLikelihoodLoss loss = make(PseudoKind::DTrace, Eigen::MatrixXd::Identity(3, 3));
  const auto g = smooth_gradient(loss, SymmetricMatrix::identity(3), 0.0, SymmetricMatrix::identity(3));
  CHECK(g.matrix().norm() < 1e-15);
  Eigen::MatrixXd l(2, 2);
  l << 1, 2, 2, 3;
  const PseudoLikelihoodLoss loss2 = make(PseudoKind::DTrace, Eigen::MatrixXd::Identity(2, 2));
  CHECK((smooth_gradient(loss2, SymmetricMatrix::zero(2), 0.7, SymmetricMatrix(l)).matrix() + l).norm() < 1e-15);
}

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd a = testing_support::random_symmetric(rng, 4);
    const Eigen::MatrixXd s = a * a.transpose() / 4.0;
    Eigen::MatrixXd w = 0.3 * testing_support::random_symmetric(rng, 4);
    w.diagonal() = w.diagonal().cwiseAbs().array() + 0.5;
    const SymmetricMatrix linear(testing_support::random_symmetric(rng, 4));
    for (PseudoKind kind : {PseudoKind::Concord, PseudoKind::DTrace}) {
      CHECK(fd_max_error(make(kind, s), SymmetricMatrix(w), 0.5, linear) <= 1e-5);
    }
  }
}

TEST_CASE("CONCORD needs a positive diagonal") {
  const PseudoLikelihoodLoss loss = make(PseudoKind::Concord, Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(smooth_gradient(loss, SymmetricMatrix::zero(2), 1.0, SymmetricMatrix::zero(2)),
                  DomainError);
}

TEST_CASE("prox gradient: diagonal S with a large penalty") {
  const Eigen::Vector3d sd(1.0, 2.0, 4.0);
  const PseudoLikelihoodLoss loss = make(PseudoKind::DTrace, sd.asDiagonal().toDenseMatrix());
  Eigen::MatrixXd l(3, 3);
  l << 1, 0.3, -0.2, 0.3, 2, 0.1, -0.2, 0.1, 3;
  SplitConfig cfg;
  cfg.inner_max = 2000;
  cfg.inner_tol = 1e-14;
  const double shift = 0.5;
  const SymmetricMatrix out =
      prox_gradient_solve(loss, shift, SymmetricMatrix(l), 2.0, cfg, SymmetricMatrix::identity(3));
  for (int i = 0; i < 3; ++i) {
    CHECK(out(i, i) == doctest::Approx(l(i, i) / (sd[i] + shift)).epsilon(1e-10));
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(out(i, j) == 0.0);
    }
  }
}

TEST_CASE("prox gradient: mu = 0 with M = m I") {
  const PseudoLikelihoodLoss loss = make(PseudoKind::DTrace, 1.5 * Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd l(2, 2);
  l << 2, 0.5, 0.5, 1;
  SplitConfig cfg;
  const SymmetricMatrix out =
      prox_gradient_solve(loss, 0.5, SymmetricMatrix(l), 0.0, cfg, SymmetricMatrix::zero(2));
  CHECK((out.matrix() - l / 2.0).norm() < 1e-12);
  // Warm start at the optimum stays there.
  const SymmetricMatrix again = prox_gradient_solve(loss, 0.5, SymmetricMatrix(l), 0.0, cfg, out);
  CHECK((again.matrix() - out.matrix()).norm() < 1e-14);
}

TEST_CASE("dykstra fixed point") {
  const PseudoLikelihoodLoss loss = make(PseudoKind::DTrace, Eigen::MatrixXd::Identity(2, 2));
  SplitConfig cfg;
  cfg.kappa = 100.0;
  // With S = I and Ω̄ = I the prox output is (I + Ω̄)/2 = I, already feasible.
  DykstraState st;
  st.omega = st.omega_bar = st.omega_half = SymmetricMatrix::from_symmetric(Eigen::MatrixXd::Identity(2, 2));
  const DykstraState next = dykstra_step(st, loss, cfg);
  CHECK((next.omega.matrix() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-10);
  CHECK((next.omega_bar.matrix() - st.omega_bar.matrix()).norm() < 1e-10);
  CHECK(next.residual < 1e-10);
}

TEST_CASE("splitting recovers the analytic D-trace minimizer") {
  SplitConfig cfg;
  cfg.mu = 0.0;
  cfg.kappa = 1e6;
  const SplitResult r = estimate_sparse_wellconditioned(SymmetricMatrix::identity(4), PseudoKind::DTrace, cfg);
  CHECK((r.omega.matrix() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-5);
  CHECK(r.report.converged);
}

TEST_CASE("kappa = 1 forces a multiple of the identity") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd a = testing_support::random_symmetric(rng, 4);
  SplitConfig cfg;
  cfg.mu = 0.05;
  cfg.kappa = 1.0;
  const SplitResult r = estimate_sparse_wellconditioned(SymmetricMatrix(a * a.transpose() / 4 + 0.1 * Eigen::MatrixXd::Identity(4, 4)), PseudoKind::Concord, cfg);
  const double c = r.omega(0, 0);
  CHECK(c > 0.0);
  CHECK((r.omega.matrix() - c * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-9);
}

TEST_CASE("config validation") {
  SplitConfig cfg;
  cfg.mu = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.mu = 0.1;
  cfg.kappa = 0.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.kappa = 2;
  cfg.outer_tol = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}
