#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace condreg {

/// Dense real symmetric matrix. Symmetry is exact: the input is averaged with
/// its transpose at construction, and inputs whose asymmetry exceeds 1e-8
/// (relative to the largest entry) are rejected.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Eigen::MatrixXd& entries);

  static SymmetricMatrix zero(Eigen::Index dim);
  static SymmetricMatrix identity(Eigen::Index dim);
  static SymmetricMatrix diagonal(const Eigen::VectorXd& values);

  /// Wraps a matrix the caller guarantees is exactly symmetric and finite.
  static SymmetricMatrix from_symmetric(Eigen::MatrixXd entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  double frobenius_norm() const { return entries_.norm(); }

 private:
  Eigen::MatrixXd entries_;
};

/// Eigenpairs with the values sorted non-increasing. Column k of `vectors` is
/// the eigenvector for `values[k]`.
struct Spectrum {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
};

/// n × p design matrix, one observation per row.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd rows);

  Eigen::Index n() const { return rows_.rows(); }
  Eigen::Index p() const { return rows_.cols(); }
  const Eigen::MatrixXd& rows() const { return rows_; }

 private:
  Eigen::MatrixXd rows_;
};

struct ConditionNumber {
  double value;  ///< λ_max/λ_min, +∞ when λ_min ≤ 0 < λ_max
  double lambda_max;
  double lambda_min;
};

/// Maximum-likelihood sample covariance (1/n) Σ (x_i − x̄)(x_i − x̄)ᵀ.
/// The divisor is n, not n − 1.
SymmetricMatrix sample_covariance(const DataMatrix& data);

/// Symmetric eigendecomposition, values descending. Each eigenvector is signed
/// so that its largest-magnitude component (first one on ties) is positive.
Spectrum eigendecompose(const SymmetricMatrix& a);

/// V diag(values) Vᵀ, symmetrized.
SymmetricMatrix reconstruct(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& values);
inline SymmetricMatrix reconstruct(const Spectrum& s) { return reconstruct(s.vectors, s.values); }

ConditionNumber condition_number(const SymmetricMatrix& a);
ConditionNumber condition_number(const Eigen::VectorXd& eigenvalues);

}  // namespace condreg
