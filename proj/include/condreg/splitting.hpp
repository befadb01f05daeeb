#pragma once

#include "condreg/spectral.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace condreg {

enum class PseudoKind { Concord, DTrace };

/// Smooth part h₁ of a pseudo-likelihood precision loss.
///   Concord: h₁(Ω) = −Σ log Ω_ii + ½Tr(ΩSΩ)   (needs Ω_ii > 0)
///   DTrace:  h₁(Ω) = ½Tr(ΩSΩ) − Tr(Ω)
struct PseudoLikelihoodLoss {
  PseudoKind kind = PseudoKind::Concord;
  SymmetricMatrix S;
};

struct SplitConfig {
  double mu = 0.0;
  double kappa = 10.0;
  double outer_tol = 1e-6;
  int outer_max = 1000;
  int inner_max = 100;
  double inner_tol = 1e-8;
  /// Weight of ½‖Ω − Ω̄‖²_F folded into the prox subproblem as S + shift·I.
  double prox_shift = 1.0;
  /// Penalize the diagonal as well (threshold applied to every entry).
  bool penalize_diagonal = false;

  /// Throws InvalidInput when any field is out of range.
  void validate() const;
};

/// Iterates of the splitting loop.
struct DykstraState {
  SymmetricMatrix omega;       ///< feasible iterate, in C_κ
  SymmetricMatrix omega_bar;   ///< dual / reflected sequence
  SymmetricMatrix omega_half;  ///< last prox output
  int iter = 0;
  double residual = 0.0;       ///< ‖Ω − Ω_half‖_F
};

struct SplitReport {
  int iterations = 0;
  double residual = 0.0;
  double objective = 0.0;
  double min_eig = 0.0;
  double max_eig = 0.0;
  double cond = 0.0;
  int nnz_offdiag = 0;                    ///< pairs i < j with |Ω_ij| above the support threshold
  std::vector<std::pair<int, int>> support;  ///< those pairs, 0-based
  bool converged = false;
};

struct SplitResult {
  SymmetricMatrix omega;
  SplitReport report;
};

/// sign(x)·max(|x| − τ, 0).
double soft_threshold(double x, double tau);

/// Prox of τ·Σ_{i<j}|X_ij| in the full Frobenius metric: each pair appears
/// twice in ‖·‖²_F, so off-diagonals are shrunk by τ/2. With
/// `penalize_diagonal` the diagonal is shrunk by τ as well.
SymmetricMatrix prox_l1_offdiag(const SymmetricMatrix& x, double tau,
                                bool penalize_diagonal = false);

/// Σ_{i<j}|Ω_ij| (plus Σ|Ω_ii| with penalize_diagonal).
double l1_offdiag(const SymmetricMatrix& omega, bool penalize_diagonal = false);

/// g(Ω) = h₁ with S replaced by S + shift·I, minus Tr(Ω·linear).
double smooth_value(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega, double shift,
                    const SymmetricMatrix& linear);
SymmetricMatrix smooth_gradient(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega,
                                double shift, const SymmetricMatrix& linear);

/// h₁(Ω) + μ·Σ_{i<j}|Ω_ij| with no splitting terms.
double pseudo_objective(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega, double mu,
                        bool penalize_diagonal = false);

/// ISTA with backtracking for min g(Ω) + μΣ_{i<j}|Ω_ij|, started at `warm`.
/// Uses config.inner_max / inner_tol / penalize_diagonal.
SymmetricMatrix prox_gradient_solve(const PseudoLikelihoodLoss& loss, double shift,
                                    const SymmetricMatrix& linear, double mu,
                                    const SplitConfig& config, const SymmetricMatrix& warm);

/// Ω⁰ = Ω̄⁰ = projection of diag(1/(S_ii + 1e-8)).
DykstraState initial_state(const PseudoLikelihoodLoss& loss, const SplitConfig& config);

/// One prox / reflect / project / correct cycle.
DykstraState dykstra_step(const DykstraState& state, const PseudoLikelihoodLoss& loss,
                          const SplitConfig& config);

/// Sparse estimate constrained to C_κ. If outer_max is reached the last
/// feasible iterate is returned with report.converged = false.
SplitResult estimate_sparse_wellconditioned(const SymmetricMatrix& s, PseudoKind kind,
                                            const SplitConfig& config);

/// The same penalized loss without the condition-number constraint
/// (plain proximal gradient, run to outer_tol on the relative change).
SplitResult estimate_sparse_unconstrained(const SymmetricMatrix& s, PseudoKind kind,
                                          const SplitConfig& config);

/// Report fields for an arbitrary estimate.
SplitReport describe_estimate(const PseudoLikelihoodLoss& loss, const SymmetricMatrix& omega,
                              double mu, bool penalize_diagonal);

}  // namespace condreg
