#include "condreg/simulate.hpp"

#include "condreg/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>
#include <sstream>

namespace condreg {

SymmetricMatrix make_illustration_precision() {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(10, 10);
  omega(0, 4) = omega(4, 0) = 0.99;
  omega(1, 5) = omega(5, 1) = 0.99;
  return SymmetricMatrix::from_symmetric(std::move(omega));
}

SimSpec::SimSpec(int n, std::uint64_t seed, SymmetricMatrix precision)
    : n_(n), seed_(seed), precision_(std::move(precision)) {
  if (n_ < 1) throw InvalidInput("SimSpec: n must be >= 1");
  if (precision_.dim() < 1) throw InvalidInput("SimSpec: empty precision matrix");
  const ConditionNumber c = condition_number(precision_);
  if (!(c.lambda_min > 0.0)) {
    std::ostringstream os;
    os << "SimSpec: precision is not positive definite (min eigenvalue " << c.lambda_min << ")";
    throw InvalidInput(os.str());
  }
}

double NormalStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

DataMatrix sample_mvn(const SimSpec& spec) {
  const int p = spec.p();
  const Eigen::LLT<Eigen::MatrixXd> llt(spec.precision().matrix());
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("sample_mvn: Cholesky factorization of the precision failed");
  }
  NormalStream normal(spec.seed());
  Eigen::MatrixXd z(p, spec.n());
  for (int i = 0; i < spec.n(); ++i) {
    for (int j = 0; j < p; ++j) z(j, i) = normal.next();
  }
  // Cov(L⁻ᵀz) = L⁻ᵀL⁻¹ = (LLᵀ)⁻¹ = Ω⁻¹.
  const Eigen::MatrixXd x = llt.matrixU().solve(z);
  return DataMatrix(x.transpose());
}

}  // namespace condreg
