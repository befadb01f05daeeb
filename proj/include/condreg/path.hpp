#pragma once

#include "condreg/clamp_problem.hpp"
#include "condreg/fixed_kappa.hpp"
#include "condreg/loss.hpp"

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace condreg {

/// u(κ) = count / (lower_s + κ·upper_s): Gaussian loss, where lower_s / upper_s
/// sum the sample eigenvalues whose estimates are clamped at u / at κu.
struct GaussianExplicit {
  int count = 0;
  double lower_s = 0.0;
  double upper_s = 0.0;
};

/// u(κ) = (A + κB) / (α + κ²C): quadratic loss.
struct QuadraticRational {
  double lower_sum = 0.0;  ///< A
  double upper_sum = 0.0;  ///< B
  int lower = 0;           ///< α
  int upper = 0;           ///< C
};

/// u pinned at the positivity floor (quadratic loss with a non-positive mean).
struct FloorSegment {
  double u = 0.0;
};

/// No closed form: u(κ) is the root of the region's stationarity equation,
/// warm-started from the nearest knot recorded during continuation.
struct NumericSamples {
  SpectralLoss loss = SpectralLoss::gaussian();
  RegionSums sums;
  std::vector<double> kappas;
  std::vector<double> us;
};

using SegmentForm = std::variant<GaussianExplicit, QuadraticRational, FloorSegment, NumericSamples>;

struct PathSegment {
  double kappa_lo = 1.0;
  double kappa_hi = 1.0;  ///< may be +∞ for the last segment
  RegionIndex region;
  SegmentForm form;

  double u_at(double kappa) const;
};

struct InitialPoint {
  double u = 0.0;
  RegionIndex region;
  bool at_floor = false;
};

/// The whole family of solutions κ ↦ (u*(κ), κu*(κ), Λ*(κ)) for κ ≥ 1.
class SolutionPath {
 public:
  SolutionPath(ClampProblem problem, double initial_u, std::vector<PathSegment> segments,
               double terminal_kappa, OpCounter ops);

  /// κ₀ = 1 followed by every region change, ending with terminal_kappa when finite.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  /// Region in force from each breakpoint on; (0, p + 1) after termination.
  const std::vector<RegionIndex>& regions() const { return regions_; }
  const std::vector<PathSegment>& segments() const { return segments_; }
  double terminal_kappa() const { return terminal_kappa_; }
  double initial_u() const { return initial_u_; }
  const Eigen::VectorXd& tilde() const { return problem_.tilde(); }
  const ClampProblem& problem() const { return problem_; }
  const OpCounter& ops() const { return ops_; }

  double u_at(double kappa) const;
  ClampedEigenSolution eval(double kappa) const;

 private:
  ClampProblem problem_;
  double initial_u_;
  std::vector<PathSegment> segments_;
  double terminal_kappa_;
  std::vector<double> breakpoints_;
  std::vector<RegionIndex> regions_;
  OpCounter ops_;
};

/// κ = 1 start: u solves Σ l′(u) = Σ dᵢ, i.e. u = (l′)⁻¹(mean d).
InitialPoint initial_point(const Eigen::VectorXd& d, const SpectralLoss& loss);

/// Piecewise-linear path (in the u-v plane) for the Gaussian likelihood.
/// `s` holds the sample eigenvalues, sorted non-increasing.
SolutionPath gaussian_path(const Eigen::VectorXd& s);

/// Rational-segment path for the quadratic loss; `d` sorted non-increasing.
SolutionPath quadratic_path(const Eigen::VectorXd& d);

/// Continuation on the region's implicit stationarity equation with adaptive κ
/// steps and bisection-refined events. Works for any twice-differentiable loss.
SolutionPath generic_path(const Eigen::VectorXd& d, const SpectralLoss& loss);

/// Picks the closed-form builder when one exists, else generic_path.
SolutionPath solution_path(const Eigen::VectorXd& d, const SpectralLoss& loss);

/// Convenience: eval_path(path, κ).
inline ClampedEigenSolution eval_path(const SolutionPath& path, double kappa) {
  return path.eval(kappa);
}

}  // namespace condreg
