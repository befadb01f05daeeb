#include "condreg/errors.hpp"
#include "condreg/simulate.hpp"

#include <doctest.h>

using namespace condreg;

TEST_CASE("illustration precision") {
  const SymmetricMatrix omega = make_illustration_precision();
  REQUIRE(omega.dim() == 10);
  CHECK(omega(0, 4) == 0.99);
  CHECK(omega(5, 1) == 0.99);
  CHECK(omega(0, 1) == 0.0);
  CHECK(omega.matrix().diagonal().isOnes());
  const ConditionNumber c = condition_number(omega);
  CHECK(c.lambda_min == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(c.lambda_max == doctest::Approx(1.99));
  CHECK(c.value == doctest::Approx(199.0).epsilon(1e-10));
}

TEST_CASE("normal stream is pinned to mt19937_64 with Box-Muller") {
  NormalStream a(42);
  std::mt19937_64 eng(42);
  const double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  CHECK(a.next() == r * std::cos(2.0 * M_PI * u2));
  CHECK(a.next() == r * std::sin(2.0 * M_PI * u2));
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const SimSpec spec(50, 123, make_illustration_precision());
  const DataMatrix a = sample_mvn(spec);
  const DataMatrix b = sample_mvn(spec);
  CHECK(a.rows() == b.rows());
  CHECK(a.n() == 50);
  CHECK(a.p() == 10);
  const DataMatrix c = sample_mvn(SimSpec(50, 124, make_illustration_precision()));
  CHECK(a.rows() != c.rows());
}

TEST_CASE("sample covariance approaches the inverse precision") {
  Eigen::Matrix3d omega;
  omega << 2, 0.5, 0, 0.5, 1.5, -0.3, 0, -0.3, 1;
  const SimSpec spec(50000, 9, SymmetricMatrix(omega));
  const SymmetricMatrix s = sample_covariance(sample_mvn(spec));
  CHECK((s.matrix() - Eigen::Matrix3d(omega.inverse())).cwiseAbs().maxCoeff() <= 0.05);

  const SymmetricMatrix si = sample_covariance(sample_mvn(SimSpec(50000, 10, SymmetricMatrix::identity(3))));
  CHECK((si.matrix() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("SimSpec validation") {
  CHECK_THROWS_AS(SimSpec(10, 1, SymmetricMatrix::diagonal(Eigen::Vector2d(1, -1))), InvalidInput);
  CHECK_THROWS_AS(SimSpec(0, 1, SymmetricMatrix::identity(2)), InvalidInput);
}
