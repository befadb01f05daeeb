#pragma once

#include "condreg/clamp_problem.hpp"
#include "condreg/loss.hpp"
#include "condreg/spectral.hpp"

#include <Eigen/Dense>

namespace condreg {

/// Optimal clamped eigenvalues for one condition-number bound.
struct ClampedEigenSolution {
  double u_star = 0.0;  ///< lower truncation
  double v_star = 0.0;  ///< upper truncation, κ·u_star
  Eigen::VectorXd lambdas;  ///< λ*ᵢ = max(u*, min(λ̃ᵢ, κu*)), aligned with d
  RegionIndex region;
  double kappa = 1.0;
  bool constraint_active = true;  ///< false when λ* = λ̃ (bound not binding)
  bool at_floor = false;          ///< u* pinned at the positivity floor ε
};

/// How the sample covariance enters the linear term Tr(Ω f(S)).
enum class CovarianceMap { Negate, Identity, ConstantIdentity, Zero };

/// Root of the region stationarity equation for `region` (1-based alpha/beta
/// indices). Exact for Gaussian and Quadratic. Throws InvalidInput for the
/// empty region (alpha = 0, beta = p + 1).
double region_stationary_u(const Eigen::VectorXd& d, const SpectralLoss& loss, double kappa,
                           RegionIndex region);

/// Exact solution of the clamped eigenvalue problem for one κ by the line walk
/// through regions. `d` must be sorted non-increasing. At most 3p region tests.
ClampedEigenSolution solve_fixed_kappa(const ClampProblem& problem, double kappa,
                                       OpCounter* ops = nullptr);
ClampedEigenSolution solve_fixed_kappa(const Eigen::VectorXd& d, const SpectralLoss& loss,
                                       double kappa, OpCounter* ops = nullptr);

/// Brute-force reference for u*: golden-section search on the univariate
/// objective Σ l(λᵢ(u)) − dᵢλᵢ(u), finished by bisection on the sign of its
/// one-sided derivative to 1e-12 relative width. Knows nothing about regions.
/// When the constraint is inactive the optimal set is an interval and the
/// largest optimal u is returned.
double oracle_univariate(const Eigen::VectorXd& d, const SpectralLoss& loss, double kappa);

/// Ω* = V Λ* Vᵀ, where V diagonalizes f(S).
SymmetricMatrix estimate(const SymmetricMatrix& s, const SpectralLoss& loss, CovarianceMap fmap,
                         double kappa);

/// Default pairing: Negate for Gaussian / NuclearPair, Identity for Quadratic.
CovarianceMap default_covariance_map(const SpectralLoss& loss);

SymmetricMatrix apply_covariance_map(const SymmetricMatrix& s, CovarianceMap fmap);

void require_valid_kappa(double kappa);

}  // namespace condreg
