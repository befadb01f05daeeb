#include "condreg/splitting.hpp"

#include "condreg/errors.hpp"
#include "condreg/projection.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace condreg {

namespace {

constexpr double kMinStep = 1e-14;
constexpr double kInitDiagEps = 1e-8;
constexpr double kSupportRelTol = 1e-6;

void require_concord_domain(const Eigen::MatrixXd& omega) {
  for (Eigen::Index i = 0; i < omega.rows(); ++i) {
    if (!(omega(i, i) > 0.0)) {
      std::ostringstream os;
      os << "CONCORD loss needs a positive diagonal (entry " << i << " is " << omega(i, i) << ")";
      throw DomainError(os.str());
    }
  }
}

void require_same_dim(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& a,
                      const char* what) {
  if (a.dim() != loss.S.dim()) {
    std::ostringstream os;
    os << what << ": dimension " << a.dim() << " does not match S (" << loss.S.dim() << ")";
    throw InvalidInput(os.str());
  }
}

Eigen::MatrixXd shifted(const PseudoLikelihoodLoss& loss, double shift) {
  Eigen::MatrixXd m = loss.S.matrix();
  m.diagonal().array() += shift;
  return m;
}

double value_with(const PseudoLikelihoodLoss& loss, const Eigen::MatrixXd& m,
                  const Eigen::MatrixXd& omega, const Eigen::MatrixXd& linear) {
  double v = 0.5 * (omega.cwiseProduct(m * omega)).sum() - omega.cwiseProduct(linear).sum();
  if (loss.kind == PseudoKind::Concord) {
    v -= omega.diagonal().array().log().sum();
  }
  return v;
}

Eigen::MatrixXd gradient_with(const PseudoLikelihoodLoss& loss, const Eigen::MatrixXd& m,
                              const Eigen::MatrixXd& omega, const Eigen::MatrixXd& linear) {
  const Eigen::MatrixXd mo = m * omega;
  Eigen::MatrixXd g = 0.5 * (mo + mo.transpose()) - linear;
  if (loss.kind == PseudoKind::Concord) {
    g.diagonal().array() -= omega.diagonal().array().inverse();
  }
  return g;
}

Eigen::MatrixXd prox_matrix(const Eigen::MatrixXd& x, double tau, bool penalize_diagonal) {
  Eigen::MatrixXd out = x;
  const Eigen::Index p = x.rows();
  const double off = 0.5 * tau;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j + 1; i < p; ++i) {
      const double v = soft_threshold(0.5 * (x(i, j) + x(j, i)), off);
      out(i, j) = v;
      out(j, i) = v;
    }
    if (penalize_diagonal) out(j, j) = soft_threshold(x(j, j), tau);
  }
  return out;
}

double l1_matrix(const Eigen::MatrixXd& x, bool penalize_diagonal) {
  double total = 0.0;
  const Eigen::Index p = x.rows();
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j + 1; i < p; ++i) total += std::abs(x(i, j));
    if (penalize_diagonal) total += std::abs(x(j, j));
  }
  return total;
}

double lipschitz_step(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("step size: eigensolver failed");
  const double top = es.eigenvalues().maxCoeff();
  return top > 0.0 ? 1.0 / top : 1.0;
}

// Proximal gradient loop shared by the subproblem and the unconstrained solve.
Eigen::MatrixXd ista(const PseudoLikelihoodLoss& loss, const Eigen::MatrixXd& m,
                     const Eigen::MatrixXd& linear, double mu, bool penalize_diagonal,
                     Eigen::MatrixXd omega, int max_iter, double tol, int* iterations) {
  const bool concord = loss.kind == PseudoKind::Concord;
  if (concord) require_concord_domain(omega);
  const double t0 = lipschitz_step(m);
  double t = t0;
  int it = 0;
  for (; it < max_iter; ++it) {
    const Eigen::MatrixXd g = gradient_with(loss, m, omega, linear);
    const double f = value_with(loss, m, omega, linear);
    Eigen::MatrixXd cand;
    for (;;) {
      if (t < kMinStep) throw NumericalError("proximal gradient: line search step underflow");
      cand = prox_matrix(omega - t * g, t * mu, penalize_diagonal);
      if (concord && !(cand.diagonal().minCoeff() > 0.0)) {
        t *= 0.5;
        continue;
      }
      const Eigen::MatrixXd delta = cand - omega;
      const double model = f + g.cwiseProduct(delta).sum() + delta.squaredNorm() / (2.0 * t);
      const double fc = value_with(loss, m, cand, linear);
      if (fc <= model + 1e-12 * (1.0 + std::abs(f))) break;
      t *= 0.5;
    }
    const double change = (cand - omega).norm() / std::max(1.0, omega.norm());
    omega = std::move(cand);
    if (change <= tol) {
      ++it;
      break;
    }
    if (concord) t = std::min(2.0 * t, t0);
  }
  if (iterations) *iterations = it;
  return omega;
}

SplitReport report_for(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega, double mu,
                       bool penalize_diagonal) {
  SplitReport r;
  const ConditionNumber c = condition_number(omega);
  r.min_eig = c.lambda_min;
  r.max_eig = c.lambda_max;
  r.cond = c.value;
  const Eigen::MatrixXd& w = omega.matrix();
  const double thresh = kSupportRelTol * std::max(1e-300, w.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::abs(w(i, j)) > thresh) r.support.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  r.nnz_offdiag = static_cast<int>(r.support.size());
  bool in_domain = true;
  if (loss.kind == PseudoKind::Concord) in_domain = w.diagonal().minCoeff() > 0.0;
  r.objective = in_domain ? pseudo_objective(loss, omega, mu, penalize_diagonal)
                          : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace

void SplitConfig::validate() const {
  auto bad = [](const std::string& msg) { throw InvalidInput("split config: " + msg); };
  if (!(mu >= 0.0) || !std::isfinite(mu)) bad("mu must be a finite number >= 0");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) bad("kappa must be a finite number >= 1");
  if (!(outer_tol > 0.0 && outer_tol < 1.0)) bad("outer_tol must lie in (0, 1)");
  if (outer_max < 1) bad("outer_max must be positive");
  if (inner_max < 1) bad("inner_max must be positive");
  if (!(inner_tol > 0.0)) bad("inner_tol must be positive");
  if (!(prox_shift > 0.0) || !std::isfinite(prox_shift)) bad("prox_shift must be positive");
}

double soft_threshold(double x, double tau) {
  if (!(tau >= 0.0)) throw InvalidInput("soft_threshold: tau must be >= 0");
  const double mag = std::abs(x) - tau;
  return mag > 0.0 ? std::copysign(mag, x) : 0.0;
}

SymmetricMatrix prox_l1_offdiag(const SymmetricMatrix& x, double tau, bool penalize_diagonal) {
  if (!(tau >= 0.0)) throw InvalidInput("prox_l1_offdiag: tau must be >= 0");
  return SymmetricMatrix::from_symmetric(prox_matrix(x.matrix(), tau, penalize_diagonal));
}

double l1_offdiag(const SymmetricMatrix& omega, bool penalize_diagonal) {
  return l1_matrix(omega.matrix(), penalize_diagonal);
}

double smooth_value(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega, double shift,
                    const SymmetricMatrix& linear) {
  require_same_dim(loss, omega, "smooth_value");
  require_same_dim(loss, linear, "smooth_value");
  if (loss.kind == PseudoKind::Concord) require_concord_domain(omega.matrix());
  return value_with(loss, shifted(loss, shift), omega.matrix(), linear.matrix());
}

SymmetricMatrix smooth_gradient(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega,
                                double shift, const SymmetricMatrix& linear) {
  require_same_dim(loss, omega, "smooth_gradient");
  require_same_dim(loss, linear, "smooth_gradient");
  if (loss.kind == PseudoKind::Concord) require_concord_domain(omega.matrix());
  Eigen::MatrixXd g = gradient_with(loss, shifted(loss, shift), omega.matrix(), linear.matrix());
  return SymmetricMatrix::from_symmetric(0.5 * (g + g.transpose()));
}

double pseudo_objective(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega, double mu,
                        bool penalize_diagonal) {
  const Eigen::Index p = loss.S.dim();
  const SymmetricMatrix linear = loss.kind == PseudoKind::DTrace ? SymmetricMatrix::identity(p)
                                                                 : SymmetricMatrix::zero(p);
  return smooth_value(loss, omega, 0.0, linear) + mu * l1_offdiag(omega, penalize_diagonal);
}

SymmetricMatrix prox_gradient_solve(const PseudoLikelihoodLoss& loss, double shift,
                                    const SymmetricMatrix& linear, double mu,
                                    const SplitConfig& config, const SymmetricMatrix& warm) {
  require_same_dim(loss, linear, "prox_gradient_solve");
  require_same_dim(loss, warm, "prox_gradient_solve");
  if (!(mu >= 0.0)) throw InvalidInput("prox_gradient_solve: mu must be >= 0");
  const Eigen::MatrixXd out =
      ista(loss, shifted(loss, shift), linear.matrix(), mu, config.penalize_diagonal,
           warm.matrix(), config.inner_max, config.inner_tol, nullptr);
  return SymmetricMatrix::from_symmetric(0.5 * (out + out.transpose()));
}

DykstraState initial_state(const PseudoLikelihoodLoss& loss, const SplitConfig& config) {
  const Eigen::VectorXd diag = loss.S.matrix().diagonal();
  const Eigen::VectorXd scaled = (diag.array() + kInitDiagEps).inverse();
  const SymmetricMatrix start = project(SymmetricMatrix::diagonal(scaled), config.kappa);
  DykstraState s;
  s.omega = start;
  s.omega_bar = start;
  s.omega_half = start;
  return s;
}

DykstraState dykstra_step(const DykstraState& state, const PseudoLikelihoodLoss& loss,
                          const SplitConfig& config) {
  const Eigen::Index p = loss.S.dim();
  const Eigen::MatrixXd& bar = state.omega_bar.matrix();
  Eigen::MatrixXd linear = bar;
  if (loss.kind == PseudoKind::DTrace) linear += Eigen::MatrixXd::Identity(p, p);

  // Warm start from the previous prox output when it is admissible.
  SymmetricMatrix warm = state.omega_half;
  if (loss.kind == PseudoKind::Concord && !(warm.matrix().diagonal().minCoeff() > 0.0)) {
    warm = state.omega;
  }

  DykstraState next;
  next.omega_half = prox_gradient_solve(loss, config.prox_shift,
                                        SymmetricMatrix::from_symmetric(std::move(linear)),
                                        config.mu, config, warm);
  const Eigen::MatrixXd half = next.omega_half.matrix();
  const Eigen::MatrixXd reflected = 2.0 * half - bar;
  next.omega = project(SymmetricMatrix::from_symmetric(reflected), config.kappa);
  next.omega_bar = SymmetricMatrix::from_symmetric(bar + next.omega.matrix() - half);
  next.iter = state.iter + 1;
  next.residual = (next.omega.matrix() - half).norm();
  return next;
}

SplitResult estimate_sparse_wellconditioned(const SymmetricMatrix& s, PseudoKind kind,
                                            const SplitConfig& config) {
  config.validate();
  if (s.dim() < 1) throw InvalidInput("estimate_sparse_wellconditioned: empty matrix");
  const PseudoLikelihoodLoss loss{kind, s};
  DykstraState state = initial_state(loss, config);
  bool converged = false;
  while (state.iter < config.outer_max) {
    DykstraState next = dykstra_step(state, loss, config);
    const double change =
        (next.omega.matrix() - state.omega.matrix()).norm() / std::max(1.0, state.omega.frobenius_norm());
    state = std::move(next);
    if (change <= config.outer_tol) {
      converged = true;
      break;
    }
  }
  SplitResult out{state.omega, report_for(loss, state.omega, config.mu, config.penalize_diagonal)};
  out.report.iterations = state.iter;
  out.report.residual = state.residual;
  out.report.converged = converged;
  return out;
}

SplitResult estimate_sparse_unconstrained(const SymmetricMatrix& s, PseudoKind kind,
                                          const SplitConfig& config) {
  config.validate();
  if (s.dim() < 1) throw InvalidInput("estimate_sparse_unconstrained: empty matrix");
  const PseudoLikelihoodLoss loss{kind, s};
  const Eigen::Index p = s.dim();
  Eigen::MatrixXd linear = Eigen::MatrixXd::Zero(p, p);
  if (kind == PseudoKind::DTrace) linear.diagonal().setOnes();
  const Eigen::VectorXd diag = s.matrix().diagonal();
  const Eigen::MatrixXd warm = (diag.array() + kInitDiagEps).inverse().matrix().asDiagonal();
  const int max_iter = config.outer_max * config.inner_max;
  int iterations = 0;
  const Eigen::MatrixXd omega = ista(loss, s.matrix(), linear, config.mu, config.penalize_diagonal,
                                     warm, max_iter, config.outer_tol * 1e-2, &iterations);
  const SymmetricMatrix result = SymmetricMatrix::from_symmetric(0.5 * (omega + omega.transpose()));
  SplitResult out{result, report_for(loss, result, config.mu, config.penalize_diagonal)};
  out.report.iterations = iterations;
  out.report.converged = iterations < max_iter;
  return out;
}

SplitReport describe_estimate(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega,
                              double mu, bool penalize_diagonal) {
  require_same_dim(loss, omega, "describe_estimate");
  return report_for(loss, omega, mu, penalize_diagonal);
}

}  // namespace condreg
