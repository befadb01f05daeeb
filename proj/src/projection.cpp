#include "condreg/projection.hpp"

#include "condreg/errors.hpp"
#include "condreg/fixed_kappa.hpp"

namespace condreg {

SymmetricMatrix project(const SymmetricMatrix& x, double kappa) {
  require_valid_kappa(kappa);
  if (x.dim() < 1) throw InvalidInput("project: empty matrix");
  const Spectrum basis = eigendecompose(x);
  const ClampedEigenSolution sol =
      solve_fixed_kappa(ClampProblem(basis.values, SpectralLoss::quadratic()), kappa);
  return reconstruct(basis.vectors, sol.lambdas);
}

SymmetricMatrix ProjectionPath::at(double kappa) const {
  return reconstruct(basis_.vectors, path_.eval(kappa).lambdas);
}

ProjectionPath project_path(const SymmetricMatrix& x) {
  if (x.dim() < 1) throw InvalidInput("project_path: empty matrix");
  Spectrum basis = eigendecompose(x);
  SolutionPath path = quadratic_path(basis.values);
  return ProjectionPath(std::move(basis), std::move(path));
}

}  // namespace condreg
