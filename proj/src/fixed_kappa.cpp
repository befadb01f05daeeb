#include "condreg/fixed_kappa.hpp"

#include "condreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace condreg {

void require_valid_kappa(double kappa) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    std::ostringstream os;
    os << "kappa must be a finite number >= 1 (got " << kappa << ")";
    throw InvalidInput(os.str());
  }
}

double region_stationary_u(const Eigen::VectorXd& d, const SpectralLoss& loss, double kappa,
                           RegionIndex region) {
  require_valid_kappa(kappa);
  const ClampProblem problem(d, loss);
  const int p = problem.dim();
  if (region.alpha < 0 || region.alpha > p || region.beta < 1 || region.beta > p + 1 ||
      region.alpha >= region.beta) {
    throw InvalidInput("region_stationary_u: region index out of range");
  }
  const auto r = problem.from_index(region);
  if (r.lower == 0 && r.upper == 0) {
    throw InvalidInput("region_stationary_u: empty region has no stationary point");
  }
  return problem.stationary_u(r, kappa);
}

ClampedEigenSolution solve_fixed_kappa(const ClampProblem& problem, double kappa,
                                       OpCounter* ops) {
  require_valid_kappa(kappa);
  const int p = problem.dim();
  const auto& tilde = problem.tilde();
  if (std::isinf(tilde[p - 1]) && tilde[p - 1] > 0.0) {
    throw NumericalError("no finite solution: every unconstrained minimizer is +inf");
  }

  ClampedEigenSolution out;
  out.kappa = kappa;
  if (problem.inactive_at(kappa)) {
    if (ops) ++ops->region_tests;
    out.u_star = tilde[p - 1];
    out.v_star = kappa * out.u_star;
    out.lambdas = tilde;
    out.region = {0, p + 1};
    out.constraint_active = false;
    return out;
  }

  const auto start = problem.floor_region(kappa, ops);
  const auto found = problem.locate(start, kappa, ops);
  out.u_star = found.u;
  out.v_star = kappa * found.u;
  out.lambdas = problem.clamp(found.u, kappa);
  out.region = problem.index(found.region);
  out.at_floor = found.floor;
  return out;
}

ClampedEigenSolution solve_fixed_kappa(const Eigen::VectorXd& d, const SpectralLoss& loss,
                                       double kappa, OpCounter* ops) {
  return solve_fixed_kappa(ClampProblem(d, loss), kappa, ops);
}

double oracle_univariate(const Eigen::VectorXd& d, const SpectralLoss& loss, double kappa) {
  require_valid_kappa(kappa);
  const Eigen::Index p = d.size();
  if (p == 0) throw InvalidInput("oracle_univariate: empty spectrum");
  Eigen::VectorXd tilde(p);
  for (Eigen::Index i = 0; i < p; ++i) tilde[i] = loss.unconstrained_minimizer(d[i]);

  auto clamped = [&](Eigen::Index i, double u) {
    return std::max(u, std::min(tilde[i], kappa * u));
  };
  auto objective = [&](double u) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double lam = clamped(i, u);
      total += loss.value(lam) - d[i] * lam;
    }
    return total;
  };
  // Right derivative of the objective in u.
  auto slope = [&](double u) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (tilde[i] < u) {
        g += loss.lprime(u) - d[i];
      } else if (tilde[i] > kappa * u) {
        g += kappa * (loss.lprime(kappa * u) - d[i]);
      }
    }
    return g;
  };

  const double eps = 1e-12 * (1.0 + d.cwiseAbs().maxCoeff());
  if (slope(eps) > 0.0) return eps;

  double hi = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::isfinite(tilde[i])) hi = std::max(hi, std::abs(tilde[i]));
  }
  int expansions = 0;
  while (!(slope(hi) > 0.0)) {
    hi *= 2.0;
    if (++expansions > 1100 || !std::isfinite(hi)) {
      throw NumericalError("oracle_univariate: objective does not turn upward (no finite u*)");
    }
  }

  // Golden-section search on the objective.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = eps;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = objective(c);
  double fe = objective(e);
  while (b - a > 1e-6 * b) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = objective(e);
    }
  }

  // Refine on the derivative sign; grow the golden bracket if round-off in the
  // objective left the minimizer just outside it.
  double lo = a;
  double width = b - a;
  while (slope(lo) > 0.0 && lo > eps) {
    lo = std::max(eps, lo - width);
    width *= 2.0;
  }
  double up = b;
  width = b - a;
  while (!(slope(up) > 0.0)) {
    up = std::min(hi, up + width);
    width *= 2.0;
  }
  while (up - lo > 1e-15 * up) {
    const double mid = 0.5 * (lo + up);
    if (mid <= lo || mid >= up) break;
    if (slope(mid) > 0.0) {
      up = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + up);
}

CovarianceMap default_covariance_map(const SpectralLoss& loss) {
  return loss.kind() == LossKind::Quadratic ? CovarianceMap::Identity : CovarianceMap::Negate;
}

SymmetricMatrix apply_covariance_map(const SymmetricMatrix& s, CovarianceMap fmap) {
  switch (fmap) {
    case CovarianceMap::Negate:
      return SymmetricMatrix::from_symmetric(-s.matrix());
    case CovarianceMap::Identity:
      return s;
    case CovarianceMap::ConstantIdentity:
      return SymmetricMatrix::identity(s.dim());
    case CovarianceMap::Zero:
      return SymmetricMatrix::zero(s.dim());
  }
  return s;
}

SymmetricMatrix estimate(const SymmetricMatrix& s, const SpectralLoss& loss, CovarianceMap fmap,
                         double kappa) {
  require_valid_kappa(kappa);
  if (s.dim() < 1) throw InvalidInput("estimate: empty matrix");
  const Spectrum basis = eigendecompose(apply_covariance_map(s, fmap));
  const ClampedEigenSolution sol = solve_fixed_kappa(ClampProblem(basis.values, loss), kappa);
  return reconstruct(basis.vectors, sol.lambdas);
}

}  // namespace condreg
