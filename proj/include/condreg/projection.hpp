#pragma once

#include "condreg/path.hpp"
#include "condreg/spectral.hpp"

namespace condreg {

/// Nearest matrix in Frobenius norm within
/// C_κ = { X ≻ 0 : λ_max(X) ≤ κ λ_min(X) }.
/// The eigenvectors of X are kept; its eigenvalues are clamped to [u*, κu*]
/// with u* from the quadratic clamped problem. Inputs whose eigenvalues are all
/// non-positive land on the floor u* = ε.
SymmetricMatrix project(const SymmetricMatrix& x, double kappa);

/// Projections of one matrix for every κ ≥ 1, sharing a single
/// eigendecomposition.
class ProjectionPath {
 public:
  ProjectionPath(Spectrum basis, SolutionPath path)
      : basis_(std::move(basis)), path_(std::move(path)) {}

  const Spectrum& basis() const { return basis_; }
  const SolutionPath& path() const { return path_; }

  SymmetricMatrix at(double kappa) const;

 private:
  Spectrum basis_;
  SolutionPath path_;
};

ProjectionPath project_path(const SymmetricMatrix& x);

}  // namespace condreg
