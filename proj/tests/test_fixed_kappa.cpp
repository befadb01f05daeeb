#include "condreg/errors.hpp"
#include "condreg/fixed_kappa.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace condreg;

TEST_CASE("quadratic fixed kappa: d = (3, 1), kappa = 2") {
  const auto sol = solve_fixed_kappa(Eigen::Vector2d(3, 1), SpectralLoss::quadratic(), 2.0);
  CHECK(sol.u_star == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(sol.v_star == doctest::Approx(2.8).epsilon(1e-15));
  CHECK(sol.lambdas[0] == doctest::Approx(2.8));
  CHECK(sol.lambdas[1] == doctest::Approx(1.4));
  CHECK(sol.region == RegionIndex{1, 2});
  CHECK(sol.constraint_active);
}

TEST_CASE("gaussian fixed kappa: s = (4, 1), kappa = 2") {
  // d = eigenvalues of −S, descending.
  const auto sol = solve_fixed_kappa(Eigen::Vector2d(-1, -4), SpectralLoss::gaussian(), 2.0);
  CHECK(sol.u_star == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sol.lambdas[0] == doctest::Approx(2.0 / 3.0));
  CHECK(sol.lambdas[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("estimate maps back through the eigenvectors") {
  const SymmetricMatrix s = SymmetricMatrix::diagonal(Eigen::Vector2d(4, 1));
  const SymmetricMatrix omega =
      estimate(s, SpectralLoss::gaussian(), CovarianceMap::Negate, 2.0);
  CHECK(omega(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(omega(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(omega(0, 1)) < 1e-15);
}

TEST_CASE("inactive constraint returns the unconstrained minimizers") {
  const auto sol = solve_fixed_kappa(Eigen::Vector2d(-1, -1.5), SpectralLoss::gaussian(), 2.0);
  CHECK_FALSE(sol.constraint_active);
  CHECK(sol.region == RegionIndex{0, 3});
  CHECK(sol.lambdas[0] == doctest::Approx(1.0));
  CHECK(sol.lambdas[1] == doctest::Approx(2.0 / 3.0));
  CHECK(sol.u_star == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("kappa = 1 collapses to a multiple of the identity") {
  const Eigen::Vector3d d(5, 2, -1);
  const auto sol = solve_fixed_kappa(d, SpectralLoss::quadratic(), 1.0);
  for (int i = 0; i < 3; ++i) CHECK(sol.lambdas[i] == doctest::Approx(2.0));
  const auto g = solve_fixed_kappa(Eigen::Vector2d(-1, -3), SpectralLoss::gaussian(), 1.0);
  CHECK(g.u_star == doctest::Approx(0.5));
}

TEST_CASE("negative definite quadratic input sits on the floor") {
  const Eigen::Vector2d d(-1, -2);
  const auto sol = solve_fixed_kappa(d, SpectralLoss::quadratic(), 3.0);
  CHECK(sol.at_floor);
  CHECK(sol.u_star == doctest::Approx(1e-12 * 3.0));
  CHECK(sol.lambdas.minCoeff() > 0.0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(solve_fixed_kappa(Eigen::Vector2d(3, 1), SpectralLoss::quadratic(), 0.5),
                  InvalidInput);
  CHECK_THROWS_AS(solve_fixed_kappa(Eigen::Vector2d(3, 1), SpectralLoss::quadratic(), NAN),
                  InvalidInput);
  CHECK_THROWS_AS(solve_fixed_kappa(Eigen::Vector2d(1, 3), SpectralLoss::quadratic(), 2.0),
                  InvalidInput);
  CHECK_THROWS_AS(solve_fixed_kappa(Eigen::Vector2d(0, 0), SpectralLoss::gaussian(), 2.0),
                  NumericalError);
}

TEST_CASE("region stationary point") {
  CHECK(region_stationary_u(Eigen::Vector2d(3, 1), SpectralLoss::quadratic(), 2.0, {1, 2}) ==
        doctest::Approx(1.4));
  CHECK_THROWS_AS(
      region_stationary_u(Eigen::Vector2d(3, 1), SpectralLoss::quadratic(), 2.0, {0, 3}),
      InvalidInput);
}

TEST_CASE("singular sample covariance under the gaussian loss") {
  // s = (3, 0): the zero eigenvalue has an infinite unconstrained estimate,
  // which the bound pulls back to κu.
  const auto sol = solve_fixed_kappa(Eigen::Vector2d(0, -3), SpectralLoss::gaussian(), 4.0);
  CHECK(sol.u_star == doctest::Approx(2.0 / 3.0));
  CHECK(sol.lambdas[0] == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("walk agrees with the brute-force oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.05, 5.0);
  const SpectralLoss losses[] = {SpectralLoss::gaussian(), SpectralLoss::quadratic(),
                                 SpectralLoss::nuclear_pair(0.7, 0.4)};
  for (int trial = 0; trial < 60; ++trial) {
    const int p = 2 + trial % 9;
    Eigen::VectorXd s(p);
    for (int i = 0; i < p; ++i) s[i] = unif(rng);
    const SpectralLoss& loss = losses[trial % 3];
    const Eigen::VectorXd d =
        testing_support::sorted_desc(loss.kind() == LossKind::Quadratic ? s : Eigen::VectorXd(-s));
    for (double kappa : {1.0, 1.7, 6.0}) {
      OpCounter ops;
      const auto sol = solve_fixed_kappa(d, loss, kappa, &ops);
      const double ref = oracle_univariate(d, loss, kappa);
      CHECK(std::abs(sol.u_star - ref) <= 1e-8 * (1 + ref));
      CHECK(ops.region_tests <= static_cast<std::size_t>(3 * p + 3));
    }
  }
}
