#pragma once

#include "condreg/loss.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace condreg {

/// Region index in the (u, v) plane. `alpha` counts eigenvalues clamped at the
/// lower truncation u (the alpha smallest λ̃); the p − beta + 1 largest λ̃ are
/// clamped at the upper truncation v = κu. alpha = 0 / beta = p + 1 mean that
/// side is inactive.
struct RegionIndex {
  int alpha = 0;
  int beta = 1;

  friend bool operator==(const RegionIndex&, const RegionIndex&) = default;
};

/// Counters for the region search, used to verify the linear-in-p bound.
struct OpCounter {
  std::size_t region_tests = 0;  ///< stationary-point evaluations + membership tests
  std::size_t scans = 0;         ///< elementwise comparisons while locating the start region

  std::size_t total() const { return region_tests + scans; }
};

/// Sufficient statistics of a region: with `lower` eigenvalues clamped at u and
/// `upper` clamped at κu, the region's stationarity condition is
///
///   lower·l′(u) + κ·upper·l′(κu) = lower_sum + κ·upper_sum
///
/// where lower_sum / upper_sum add the corresponding d values.
struct RegionSums {
  int lower = 0;
  int upper = 0;
  double lower_sum = 0.0;
  double upper_sum = 0.0;
};

/// Root u of the region stationarity equation for one κ. Closed forms for
/// Gaussian and Quadratic; safeguarded Newton otherwise (warm-started from
/// `hint` when positive). Returns +∞ when the left side stays below the right
/// side for all u > 0, and NaN for the empty region (no clamped eigenvalues).
/// Quadratic may return a non-positive value.
double solve_region_equation(const SpectralLoss& loss, const RegionSums& sums, double kappa,
                             double hint = 0.0);

/// Left side minus right side of the region stationarity equation.
double region_residual(const SpectralLoss& loss, const RegionSums& sums, double kappa, double u);

/// du/dκ along the region's implicit curve, from differentiating the
/// stationarity equation.
double region_ode_rhs(const SpectralLoss& loss, const RegionSums& sums, double kappa, double u);

/// Eigenvalue-level view of a clamped problem: d sorted non-increasing, the
/// per-eigenvalue unconstrained minimizers λ̃ (also non-increasing) and prefix
/// sums so every region test costs O(1).
class ClampProblem {
 public:
  struct Region {
    int lower = 0;  ///< number of λ̃ clamped at u (taken from the bottom)
    int upper = 0;  ///< number of λ̃ clamped at κu (taken from the top)
    friend bool operator==(const Region&, const Region&) = default;
  };

  struct Located {
    Region region;
    double u = 0.0;
    bool floor = false;  ///< optimum pinned at the positivity floor u = ε
  };

  ClampProblem(Eigen::VectorXd d, SpectralLoss loss);

  int dim() const { return static_cast<int>(d_.size()); }
  const Eigen::VectorXd& d() const { return d_; }
  const Eigen::VectorXd& tilde() const { return tilde_; }
  const SpectralLoss& loss() const { return loss_; }

  /// Smallest admissible lower truncation, ε = 1e-12 (1 + max |dᵢ|).
  double floor_eps() const { return floor_eps_; }

  RegionSums sums(Region r) const;
  RegionIndex index(Region r) const { return {r.lower, dim() - r.upper + 1}; }
  Region from_index(RegionIndex idx) const { return {idx.alpha, dim() - idx.beta + 1}; }

  /// u-interval [lo, hi] on which region r is consistent at this κ.
  void interval(Region r, double kappa, double& lo, double& hi) const;

  double stationary_u(Region r, double kappa, double hint = 0.0) const {
    return solve_region_equation(loss_, sums(r), kappa, hint);
  }

  /// True when the unconstrained λ̃ already satisfy max/min ≤ κ.
  bool inactive_at(double kappa) const;

  /// Region containing the floor point u = ε for this κ.
  Region floor_region(double kappa, OpCounter* ops = nullptr) const;

  /// Walk from `start` along the line v = κu until the stationary point lies in
  /// the current region. Always terminates and moves each count monotonically
  /// per direction; at most 2p + 1 region tests when started from the floor.
  /// `tol` is the relative slack used when comparing against region bounds.
  Located locate(Region start, double kappa, OpCounter* ops = nullptr, double hint = 0.0,
                 double tol = 1e-12) const;

  /// λ*ᵢ = max(u, min(λ̃ᵢ, κu)).
  Eigen::VectorXd clamp(double u, double kappa) const;

  /// Σ l(λᵢ) − dᵢλᵢ.
  double objective(const Eigen::VectorXd& lambdas) const;

 private:
  Eigen::VectorXd d_;
  Eigen::VectorXd tilde_;
  SpectralLoss loss_;
  std::vector<double> top_sum_;     // top_sum_[k]    = d_0 + … + d_{k−1}
  std::vector<double> bottom_sum_;  // bottom_sum_[k] = d_{p−1} + … + d_{p−k}
  double floor_eps_ = 0.0;
};

}  // namespace condreg
