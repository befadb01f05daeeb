#include "condreg/spectral.hpp"

#include "condreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace condreg {

namespace {

constexpr double kAsymmetryTol = 1e-8;
constexpr double kOrthogonalityTol = 1e-8;

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& entries) {
  if (entries.rows() != entries.cols()) {
    throw InvalidInput("SymmetricMatrix: matrix is " + std::to_string(entries.rows()) + "x" +
                       std::to_string(entries.cols()) + ", expected square");
  }
  require_finite(entries, "SymmetricMatrix");
  if (entries.size() > 0) {
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > kAsymmetryTol * scale) {
      throw InvalidInput("SymmetricMatrix: asymmetry " + std::to_string(asym) +
                         " exceeds tolerance");
    }
  }
  entries_ = 0.5 * (entries + entries.transpose());
}

SymmetricMatrix SymmetricMatrix::zero(Eigen::Index dim) {
  return from_symmetric(Eigen::MatrixXd::Zero(dim, dim));
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  return from_symmetric(Eigen::MatrixXd::Identity(dim, dim));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Eigen::VectorXd& values) {
  require_finite(values, "SymmetricMatrix::diagonal");
  return from_symmetric(values.asDiagonal().toDenseMatrix());
}

SymmetricMatrix SymmetricMatrix::from_symmetric(Eigen::MatrixXd entries) {
  SymmetricMatrix out;
  out.entries_ = std::move(entries);
  return out;
}

DataMatrix::DataMatrix(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw InvalidInput("DataMatrix: need n >= 1 and p >= 1");
  }
  require_finite(rows_, "DataMatrix");
}

SymmetricMatrix sample_covariance(const DataMatrix& data) {
  const Eigen::RowVectorXd mean = data.rows().colwise().mean();
  const Eigen::MatrixXd centered = data.rows().rowwise() - mean;
  const Eigen::MatrixXd s =
      (centered.transpose() * centered) / static_cast<double>(data.n());
  return SymmetricMatrix::from_symmetric(0.5 * (s + s.transpose()));
}

Spectrum eigendecompose(const SymmetricMatrix& a) {
  const Eigen::Index p = a.dim();
  Spectrum out;
  if (p == 0) {
    out.vectors.resize(0, 0);
    out.values.resize(0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecompose: eigensolver did not converge (p = " +
                         std::to_string(p) + ", |A|_F = " +
                         std::to_string(a.frobenius_norm()) + ")");
  }
  // Eigen returns ascending order; flip to descending.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::Index pivot = 0;
    out.vectors.col(k).cwiseAbs().maxCoeff(&pivot);
    if (out.vectors(pivot, k) < 0.0) out.vectors.col(k) *= -1.0;
  }
  return out;
}

SymmetricMatrix reconstruct(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& values) {
  if (vectors.rows() != vectors.cols() || vectors.cols() != values.size()) {
    throw InvalidInput("reconstruct: dimension mismatch");
  }
  require_finite(values, "reconstruct");
  const Eigen::Index p = vectors.cols();
  if (p > 0 && (vectors.transpose() * vectors - Eigen::MatrixXd::Identity(p, p))
                       .cwiseAbs()
                       .maxCoeff() > kOrthogonalityTol) {
    throw InvalidInput("reconstruct: vectors are not orthogonal");
  }
  const Eigen::MatrixXd m = vectors * values.asDiagonal() * vectors.transpose();
  return SymmetricMatrix::from_symmetric(0.5 * (m + m.transpose()));
}

ConditionNumber condition_number(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) return {1.0, 0.0, 0.0};
  const double hi = eigenvalues.maxCoeff();
  const double lo = eigenvalues.minCoeff();
  // Anything not positive definite lies outside every C_κ.
  const double value = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return {value, hi, lo};
}

ConditionNumber condition_number(const SymmetricMatrix& a) {
  if (a.dim() == 0) return {1.0, 0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("condition_number: eigensolver did not converge");
  }
  return condition_number(Eigen::VectorXd(solver.eigenvalues()));
}

}  // namespace condreg
