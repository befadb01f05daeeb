#include "condreg/errors.hpp"
#include "condreg/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace condreg;

TEST_CASE("sample covariance uses the 1/n divisor") {
  Eigen::MatrixXd rows(3, 2);
  rows << 1, 1, -1, 0, 0, -1;
  const SymmetricMatrix s = sample_covariance(DataMatrix(rows));
  CHECK(s(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(s(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("sample covariance centers the columns") {
  Eigen::MatrixXd rows(2, 1);
  rows << 5, 7;
  CHECK(sample_covariance(DataMatrix(rows))(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("eigendecompose returns descending values and a sign convention") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const Spectrum sp = eigendecompose(SymmetricMatrix(a));
  CHECK(sp.values[0] == doctest::Approx(3.0));
  CHECK(sp.values[1] == doctest::Approx(1.0));
  for (int k = 0; k < 2; ++k) {
    Eigen::Index arg = 0;
    sp.vectors.col(k).cwiseAbs().maxCoeff(&arg);
    CHECK(sp.vectors(arg, k) > 0.0);
  }
  CHECK((reconstruct(sp).matrix() - a).norm() < 1e-14);
}

TEST_CASE("symmetric matrix validation") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 1;
  CHECK_THROWS_AS(SymmetricMatrix{a}, InvalidInput);
  Eigen::MatrixXd nonsquare(2, 3);
  nonsquare.setZero();
  CHECK_THROWS_AS(SymmetricMatrix{nonsquare}, InvalidInput);
  Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(2, 2);
  nan(0, 0) = NAN;
  CHECK_THROWS_AS(SymmetricMatrix{nan}, InvalidInput);
  Eigen::MatrixXd tiny(2, 2);
  tiny << 1, 0.5, 0.5 + 1e-12, 1;
  const SymmetricMatrix s(tiny);
  CHECK(s(0, 1) == s(1, 0));
}

TEST_CASE("condition number") {
  CHECK(condition_number(SymmetricMatrix::diagonal(Eigen::Vector3d(4, 2, 1))).value ==
        doctest::Approx(4.0));
  CHECK(std::isinf(condition_number(SymmetricMatrix::diagonal(Eigen::Vector2d(1, 0))).value));
  CHECK(std::isinf(condition_number(SymmetricMatrix::diagonal(Eigen::Vector2d(-1, -2))).value));
  CHECK(condition_number(SymmetricMatrix::identity(3)).value == 1.0);
}

TEST_CASE("reconstruct rejects non-orthogonal bases") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 1, 0, 1;
  CHECK_THROWS_AS(reconstruct(v, Eigen::Vector2d(1, 1)), InvalidInput);
}

TEST_CASE("data matrix validation") {
  CHECK_THROWS_AS(DataMatrix(Eigen::MatrixXd(0, 3)), InvalidInput);
}
