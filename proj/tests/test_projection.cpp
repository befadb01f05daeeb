#include "condreg/errors.hpp"
#include "condreg/projection.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace condreg;

TEST_CASE("project diag(3, 1) at kappa 2") {
  const SymmetricMatrix p = project(SymmetricMatrix::diagonal(Eigen::Vector2d(3, 1)), 2.0);
  CHECK(p(0, 0) == doctest::Approx(2.8).epsilon(1e-15));
  CHECK(p(1, 1) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(p(0, 1) == 0.0);
}

TEST_CASE("feasible input is left unchanged") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 0.5, 0.5, 1.5;
  const SymmetricMatrix x(a);
  CHECK((project(x, 10.0).matrix() - a).norm() < 1e-14);
}

TEST_CASE("kappa = 1 returns mean eigenvalue times identity") {
  Eigen::MatrixXd a(3, 3);
  a << 4, 1, 0, 1, -1, 2, 0, 2, 3;
  const SymmetricMatrix p = project(SymmetricMatrix(a), 1.0);
  CHECK((p.matrix() - 2.0 * Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-13);
}

TEST_CASE("negative definite input is pushed to a positive definite matrix") {
  const SymmetricMatrix p = project(SymmetricMatrix::diagonal(Eigen::Vector3d(-1, -2, -5)), 4.0);
  const ConditionNumber c = condition_number(p);
  CHECK(c.lambda_min > 0.0);
  CHECK(c.value <= 4.0 * (1 + 1e-8));
}

TEST_CASE("project_path matches direct projections") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd a = testing_support::random_symmetric(rng, 8) - 0.3 * Eigen::MatrixXd::Identity(8, 8);
  const SymmetricMatrix x(a);
  const ProjectionPath path = project_path(x);
  for (int i = 0; i < 30; ++i) {
    const double kappa = 1.0 + 0.5 * i;
    CHECK((path.at(kappa).matrix() - project(x, kappa).matrix()).norm() <= 1e-8);
  }
}

TEST_CASE("project_path on diag(3, 1)") {
  const ProjectionPath path = project_path(SymmetricMatrix::diagonal(Eigen::Vector2d(3, 1)));
  CHECK(path.path().terminal_kappa() == doctest::Approx(3.0));
  CHECK(path.path().u_at(2.0) == doctest::Approx(7.0 / 5.0));
  CHECK(project_path(SymmetricMatrix::identity(4)).path().segments().empty());
}

TEST_CASE("project rejects kappa < 1") {
  CHECK_THROWS_AS(project(SymmetricMatrix::identity(2), 0.9), InvalidInput);
}
