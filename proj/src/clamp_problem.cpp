#include "condreg/clamp_problem.hpp"

#include "condreg/detail/root.hpp"
#include "condreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace condreg {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool at_or_below(double x, double bound, double tol = kBoundaryTol) {
  return x <= bound + tol * std::abs(bound);
}

bool at_or_above(double x, double bound, double tol = kBoundaryTol) {
  return x >= bound - tol * std::abs(bound);
}

}  // namespace

double solve_region_equation(const SpectralLoss& loss, const RegionSums& sums, double kappa,
                             double hint) {
  const int n = sums.lower + sums.upper;
  if (n == 0) return kNaN;
  const double rhs = sums.lower_sum + kappa * sums.upper_sum;
  switch (loss.kind()) {
    case LossKind::Gaussian: {
      // −(lower + upper)/u = rhs, with rhs = −(Σ s) over the clamped set.
      if (!(rhs < 0.0)) return kInfinity;
      return static_cast<double>(n) / -rhs;
    }
    case LossKind::Quadratic:
      return rhs / (sums.lower + kappa * kappa * sums.upper);
    case LossKind::NuclearPair:
      break;
  }
  const double sup = loss.lprime_supremum() * (sums.lower + kappa * sums.upper);
  if (rhs >= sup) return kInfinity;
  const double lower = sums.lower;
  const double upper = sums.upper;
  auto f = [&](double u) {
    return lower * loss.lprime(u) + kappa * upper * loss.lprime(kappa * u) - rhs;
  };
  auto df = [&](double u) {
    return lower * loss.lsecond(u) + kappa * kappa * upper * loss.lsecond(kappa * u);
  };
  return detail::increasing_root(f, df, hint, 1e-14 * (1.0 + std::abs(rhs)),
                                 "region stationary point");
}

double region_residual(const SpectralLoss& loss, const RegionSums& sums, double kappa,
                       double u) {
  const double lhs = sums.lower * loss.lprime(u) + kappa * sums.upper * loss.lprime(kappa * u);
  return lhs - (sums.lower_sum + kappa * sums.upper_sum);
}

double region_ode_rhs(const SpectralLoss& loss, const RegionSums& sums, double kappa,
                      double u) {
  const double v = kappa * u;
  const double num =
      sums.upper_sum - sums.upper * loss.lprime(v) - v * sums.upper * loss.lsecond(v);
  const double den = sums.lower * loss.lsecond(u) + kappa * kappa * sums.upper * loss.lsecond(v);
  return num / den;
}

ClampProblem::ClampProblem(Eigen::VectorXd d, SpectralLoss loss)
    : d_(std::move(d)), loss_(loss) {
  const int p = dim();
  if (p < 1) throw InvalidInput("ClampProblem: empty spectrum");
  if (!d_.allFinite()) throw InvalidInput("ClampProblem: non-finite eigenvalue");
  for (int i = 1; i < p; ++i) {
    if (d_[i] > d_[i - 1]) {
      throw InvalidInput("ClampProblem: eigenvalues must be sorted non-increasing");
    }
  }
  tilde_.resize(p);
  for (int i = 0; i < p; ++i) {
    tilde_[i] = loss_.unconstrained_minimizer(d_[i]);
    // Root-finding noise must not break the ordering inherited from d.
    if (i > 0) tilde_[i] = std::min(tilde_[i], tilde_[i - 1]);
  }
  top_sum_.assign(p + 1, 0.0);
  bottom_sum_.assign(p + 1, 0.0);
  for (int k = 0; k < p; ++k) {
    top_sum_[k + 1] = top_sum_[k] + d_[k];
    bottom_sum_[k + 1] = bottom_sum_[k] + d_[p - 1 - k];
  }
  floor_eps_ = 1e-12 * (1.0 + d_.cwiseAbs().maxCoeff());
}

RegionSums ClampProblem::sums(Region r) const {
  return {r.lower, r.upper, bottom_sum_[r.lower], top_sum_[r.upper]};
}

void ClampProblem::interval(Region r, double kappa, double& lo, double& hi) const {
  const int p = dim();
  const int a = r.lower;
  const int b = r.upper;
  lo = -kInfinity;
  hi = kInfinity;
  if (a >= 1) lo = std::max(lo, tilde_[p - a]);
  if (b <= p - 1) lo = std::max(lo, tilde_[b] / kappa);
  if (a <= p - 1) hi = std::min(hi, tilde_[p - a - 1]);
  if (b >= 1) hi = std::min(hi, tilde_[b - 1] / kappa);
}

bool ClampProblem::inactive_at(double kappa) const {
  const double top = tilde_[0];
  const double bottom = tilde_[dim() - 1];
  return bottom > 0.0 && std::isfinite(top) && top <= kappa * bottom * (1.0 + kBoundaryTol);
}

ClampProblem::Region ClampProblem::floor_region(double kappa, OpCounter* ops) const {
  const int p = dim();
  const double eps = floor_eps_;
  Region r;
  while (r.lower < p && tilde_[p - 1 - r.lower] < eps) ++r.lower;
  while (r.upper < p - r.lower && tilde_[r.upper] > kappa * eps) ++r.upper;
  if (ops) ops->scans += static_cast<std::size_t>(r.lower + r.upper + 2);
  return r;
}

ClampProblem::Located ClampProblem::locate(Region start, double kappa, OpCounter* ops,
                                           double hint, double tol) const {
  const int p = dim();
  const double eps = floor_eps_;
  Region r = start;
  int dir = 0;

  auto step_right = [&](double hi) {
    const int a = r.lower;
    const int b = r.upper;
    if (a <= p - 1 && at_or_below(tilde_[p - a - 1], hi, tol)) ++r.lower;
    if (b >= 1 && at_or_below(tilde_[b - 1] / kappa, hi, tol)) --r.upper;
    if (r.lower + r.upper > p) --r.upper;
    if (r == Region{a, b} && a + b < p) ++r.lower;
  };
  auto step_left = [&](double lo) {
    const int a = r.lower;
    const int b = r.upper;
    if (a >= 1 && at_or_above(tilde_[p - a], lo, tol)) --r.lower;
    if (b <= p - 1 && at_or_above(tilde_[b] / kappa, lo, tol)) ++r.upper;
    if (r.lower + r.upper > p) --r.lower;
    if (r == Region{a, b} && a > 0) --r.lower;
  };

  // F(u) is convex, so the walk only turns back when the optimum is the kink
  // shared with the region just left; that boundary is returned.
  Region prev{-1, -1};
  const int max_steps = 4 * p + 8;
  for (int step = 0; step < max_steps; ++step) {
    if (ops) ++ops->region_tests;
    double lo = 0.0;
    double hi = 0.0;
    interval(r, kappa, lo, hi);
    const double lo_eff = std::max(lo, eps);
    const Region here = r;

    if (r.lower == 0 && r.upper == 0) {
      // Nothing clamped: every u in the interval is optimal; report the largest.
      if (at_or_below(lo_eff, hi, tol)) return {r, std::isfinite(hi) ? hi : lo_eff, false};
      if (dir < 0) {
        step_left(lo);
      } else {
        step_right(hi);
      }
      if (r == prev) return {here, dir < 0 ? lo : hi, false};
      prev = here;
      continue;
    }

    const double u = stationary_u(r, kappa, hint);
    if (std::isinf(u) || !at_or_below(u, hi, tol)) {
      if (!std::isfinite(hi)) {
        std::ostringstream os;
        os << "no finite solution: stationary point diverges in region (alpha=" << r.lower
           << ", beta=" << p - r.upper + 1 << ") at kappa=" << kappa;
        throw NumericalError(os.str());
      }
      step_right(hi);
      if (r == prev) return {here, hi, false};
      prev = here;
      dir = 1;
      continue;
    }
    if (!at_or_above(u, lo_eff, tol)) {
      if (lo <= eps) return {floor_region(kappa, ops), eps, true};
      step_left(lo);
      if (r == prev) return {here, lo, false};
      prev = here;
      dir = -1;
      continue;
    }
    return {r, std::clamp(u, lo_eff, std::max(lo_eff, hi)), false};
  }
  throw NumericalError("region walk did not terminate");
}

Eigen::VectorXd ClampProblem::clamp(double u, double kappa) const {
  const double v = kappa * u;
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = std::max(u, std::min(tilde_[i], v));
  return out;
}

double ClampProblem::objective(const Eigen::VectorXd& lambdas) const {
  double total = 0.0;
  for (int i = 0; i < dim(); ++i) total += loss_.value(lambdas[i]) - d_[i] * lambdas[i];
  return total;
}

}  // namespace condreg
