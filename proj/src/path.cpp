#include "condreg/path.hpp"

#include "condreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace condreg {

namespace {

using Region = ClampProblem::Region;

constexpr double kProbe = 1e-10;        // relative offset used to classify the next region
constexpr double kEventFloor = 1e-13;   // events closer than this to the start are ignored
constexpr double kKappaMax = 1e12;      // numeric continuation gives up on events past this
constexpr double kBoundaryTol = 1e-12;

double smallest_root_above(double q2, double q1, double q0, double above) {
  double best = kInfinity;
  auto consider = [&](double r) {
    if (std::isfinite(r) && r > above && r < best) best = r;
  };
  const double scale = std::max({std::abs(q2), std::abs(q1), std::abs(q0)});
  if (scale == 0.0) return best;
  if (std::abs(q2) <= 1e-15 * scale) {
    if (q1 != 0.0) consider(-q0 / q1);
    return best;
  }
  double disc = q1 * q1 - 4.0 * q2 * q0;
  if (disc < 0.0) {
    if (disc < -1e-14 * (q1 * q1 + std::abs(4.0 * q2 * q0))) return best;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double t = -0.5 * (q1 + std::copysign(sq, q1));
  if (t != 0.0) {
    consider(t / q2);
    consider(q0 / t);
  } else {
    consider(0.0);
  }
  return best;
}

SegmentForm closed_form(const ClampProblem& problem, Region r, bool floor) {
  const RegionSums s = problem.sums(r);
  if (floor) return FloorSegment{problem.floor_eps()};
  if (problem.loss().kind() == LossKind::Gaussian) {
    return GaussianExplicit{s.lower + s.upper, -s.lower_sum, -s.upper_sum};
  }
  return QuadraticRational{s.lower_sum, s.upper_sum, s.lower, s.upper};
}

// Smallest κ > above at which the closed-form u(κ) equals c.
double root_u_equals(const ClampProblem& problem, Region r, double c, double above) {
  const RegionSums s = problem.sums(r);
  if (problem.loss().kind() == LossKind::Gaussian) {
    const double n = s.lower + s.upper;
    const double ls = -s.lower_sum;
    const double us = -s.upper_sum;
    if (!(us > 0.0)) return kInfinity;
    const double k = (n / c - ls) / us;
    return k > above ? k : kInfinity;
  }
  // c·C·κ² − B·κ + (c·α − A) = 0
  return smallest_root_above(c * s.upper, -s.upper_sum, c * s.lower - s.lower_sum, above);
}

// Smallest κ > above at which κ·u(κ) equals c.
double root_v_equals(const ClampProblem& problem, Region r, double c, double above) {
  const RegionSums s = problem.sums(r);
  if (problem.loss().kind() == LossKind::Gaussian) {
    const double n = s.lower + s.upper;
    const double ls = -s.lower_sum;
    const double us = -s.upper_sum;
    const double den = n - c * us;
    if (den == 0.0) return kInfinity;
    const double k = c * ls / den;
    return k > above ? k : kInfinity;
  }
  // (B − c·C)·κ² + A·κ − c·α = 0
  return smallest_root_above(s.upper_sum - c * s.upper, s.lower_sum, -c * s.lower, above);
}

double next_closed_form_event(const ClampProblem& problem, Region r, bool floor, double above,
                              OpCounter& ops) {
  const int p = problem.dim();
  const auto& tilde = problem.tilde();
  const double eps = problem.floor_eps();
  const int a = r.lower;
  const int b = r.upper;
  const bool quadratic = problem.loss().kind() == LossKind::Quadratic;
  double best = kInfinity;
  auto take = [&](double k) {
    ++ops.region_tests;
    best = std::min(best, k);
  };
  if (floor) {
    if (b >= 1 && std::isfinite(tilde[b - 1])) {
      const double k = tilde[b - 1] / eps;
      if (k > above) take(k);
    }
    take(root_u_equals(problem, r, eps, above));
    return best;
  }
  if (a >= 1 && std::isfinite(tilde[p - a]) && tilde[p - a] > eps) {
    take(root_u_equals(problem, r, tilde[p - a], above));
  }
  if (a <= p - 1 && p - a - 1 >= b && std::isfinite(tilde[p - a - 1]) && tilde[p - a - 1] > 0.0) {
    take(root_u_equals(problem, r, tilde[p - a - 1], above));
  }
  if (b >= 1 && std::isfinite(tilde[b - 1])) {
    take(root_v_equals(problem, r, tilde[b - 1], above));
  }
  if (b <= p - 1 && b <= p - a - 1 && std::isfinite(tilde[b]) && tilde[b] > 0.0) {
    take(root_v_equals(problem, r, tilde[b], above));
  }
  if (quadratic && (a == 0 || tilde[p - a] < eps)) {
    take(root_u_equals(problem, r, eps, above));
  }
  return best;
}

InitialPoint initial_point_impl(const ClampProblem& problem, OpCounter* ops) {
  const int p = problem.dim();
  const auto& tilde = problem.tilde();
  const double eps = problem.floor_eps();
  const double mean = problem.d().mean();
  const double u1 = problem.loss().lprime_inverse(mean);
  if (!std::isfinite(u1)) {
    std::ostringstream os;
    os << "initial point: (l')^{-1}(mean d) is not finite for " << problem.loss().name()
       << " (mean d = " << mean << ")";
    throw NumericalError(os.str());
  }
  InitialPoint out;
  if (u1 < eps) {
    const Region r = problem.floor_region(1.0, ops);
    out.u = eps;
    out.region = problem.index(r);
    out.at_floor = true;
    return out;
  }
  Region r;
  const double tol = kBoundaryTol * std::abs(u1);
  while (r.lower < p && tilde[p - 1 - r.lower] < u1 - tol) ++r.lower;
  while (r.upper < p - r.lower && tilde[r.upper] > u1 + tol) ++r.upper;
  if (ops) ops->scans += static_cast<std::size_t>(r.lower + r.upper + 2);
  out.u = u1;
  out.region = problem.index(r);
  return out;
}

// κ at which λ̃ itself becomes feasible; +∞ when that never happens.
double known_terminal(const ClampProblem& problem) {
  const auto& tilde = problem.tilde();
  const double top = tilde[0];
  const double bottom = tilde[problem.dim() - 1];
  if (!(bottom > 0.0) || !std::isfinite(top)) return kInfinity;
  return std::max(1.0, top / bottom);
}

bool consistent(const ClampProblem& problem, Region r, double kappa, double u) {
  if (!std::isfinite(u)) return false;
  double lo = 0.0;
  double hi = 0.0;
  problem.interval(r, kappa, lo, hi);
  lo = std::max(lo, problem.floor_eps());
  return u <= hi + kBoundaryTol * std::abs(hi) && u >= lo - kBoundaryTol * std::abs(lo);
}

SolutionPath point_path(ClampProblem problem, double u, OpCounter ops) {
  return SolutionPath(std::move(problem), u, {}, 1.0, ops);
}

SolutionPath build_closed_form(ClampProblem problem) {
  OpCounter ops;
  const int p = problem.dim();
  const InitialPoint init = initial_point_impl(problem, &ops);
  Region r = problem.from_index(init.region);
  bool floor = init.at_floor;
  if (!floor && r.lower == 0 && r.upper == 0) return point_path(std::move(problem), init.u, ops);

  const double stop = known_terminal(problem);
  if (stop <= 1.0) return point_path(std::move(problem), init.u, ops);
  std::vector<PathSegment> segments;
  double seg_start = 1.0;
  double search_from = 1.0;
  double terminal = kInfinity;
  double hint = init.u;
  const int guard = 16 * p + 64;
  for (int it = 0;; ++it) {
    if (it > guard) throw NumericalError("closed-form path: too many events");
    if (!floor && r.lower == 0 && r.upper == 0) {
      terminal = seg_start;
      break;
    }
    const double event =
        next_closed_form_event(problem, r, floor, search_from * (1.0 + kEventFloor), ops);
    if (event >= stop * (1.0 - 1e-12)) {
      segments.push_back({seg_start, stop, problem.index(r), closed_form(problem, r, floor)});
      terminal = stop;
      break;
    }
    if (!std::isfinite(event)) {
      segments.push_back({seg_start, kInfinity, problem.index(r), closed_form(problem, r, floor)});
      break;
    }
    const double probe = event * (1.0 + kProbe);
    const auto next = problem.locate(r, probe, &ops, hint, 0.0);
    if (next.region == r && next.floor == floor) {
      search_from = probe;  // boundary touched, not crossed
      continue;
    }
    segments.push_back({seg_start, event, problem.index(r), closed_form(problem, r, floor)});
    r = next.region;
    floor = next.floor;
    hint = next.u;
    seg_start = event;
    search_from = probe;
  }
  return SolutionPath(std::move(problem), init.u, std::move(segments), terminal, ops);
}

SolutionPath build_numeric(ClampProblem problem) {
  OpCounter ops;
  const int p = problem.dim();
  const InitialPoint init = initial_point_impl(problem, &ops);
  if (init.at_floor) {
    throw NumericalError("generic_path: optimum sits at the positivity floor; use quadratic_path");
  }
  Region r = problem.from_index(init.region);
  if (r.lower == 0 && r.upper == 0) return point_path(std::move(problem), init.u, ops);

  const double stop = known_terminal(problem);
  if (stop <= 1.0) return point_path(std::move(problem), init.u, ops);
  const SpectralLoss& loss = problem.loss();
  std::vector<PathSegment> segments;
  double kappa = 1.0;
  double u = init.u;
  double seg_start = 1.0;
  NumericSamples knots{loss, problem.sums(r), {kappa}, {u}};
  double step = 0.1;
  double terminal = kInfinity;
  const int guard = 4000 * (p + 4);

  for (int it = 0;; ++it) {
    if (it > guard) throw NumericalError("generic_path: continuation did not finish");
    if (r.lower == 0 && r.upper == 0) {
      terminal = seg_start;
      break;
    }
    if (kappa >= stop * (1.0 - 1e-14)) {
      segments.push_back({seg_start, stop, problem.index(r), knots});
      terminal = stop;
      break;
    }
    const double trial = std::min(kappa * (1.0 + step), stop);
    if (trial > kKappaMax) {
      segments.push_back({seg_start, kInfinity, problem.index(r), knots});
      break;
    }
    ++ops.region_tests;
    const double trial_u = problem.stationary_u(r, trial, u);
    if (consistent(problem, r, trial, trial_u)) {
      kappa = trial;
      u = trial_u;
      knots.kappas.push_back(kappa);
      knots.us.push_back(u);
      step = std::min(2.0 * step, 0.25);
      continue;
    }
    // Event inside (kappa, trial]: bisect on region consistency.
    double good = kappa;
    double bad = trial;
    double good_u = u;
    while (bad - good > 1e-14 * bad) {
      const double mid = 0.5 * (good + bad);
      if (mid <= good || mid >= bad) break;
      ++ops.region_tests;
      const double mid_u = problem.stationary_u(r, mid, good_u);
      if (consistent(problem, r, mid, mid_u)) {
        good = mid;
        good_u = mid_u;
      } else {
        bad = mid;
      }
    }
    const double event = bad;
    const auto next = problem.locate(r, event, &ops, good_u);
    if (next.floor) {
      throw NumericalError("generic_path: optimum reached the positivity floor; use quadratic_path");
    }
    if (next.region == r) {
      // Consistency flickered at the tolerance edge; step past it.
      kappa = event;
      u = next.u;
      continue;
    }
    knots.kappas.push_back(event);
    knots.us.push_back(problem.stationary_u(r, event, good_u));
    segments.push_back({seg_start, event, problem.index(r), knots});
    r = next.region;
    kappa = event;
    u = next.u;
    seg_start = event;
    knots = NumericSamples{loss, problem.sums(r), {kappa}, {u}};
    step = std::max(0.5 * step, 1e-3);
  }
  return SolutionPath(std::move(problem), init.u, std::move(segments), terminal, ops);
}

}  // namespace

double PathSegment::u_at(double kappa) const {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, GaussianExplicit>) {
          return f.count / (f.lower_s + kappa * f.upper_s);
        } else if constexpr (std::is_same_v<T, QuadraticRational>) {
          return (f.lower_sum + kappa * f.upper_sum) / (f.lower + kappa * kappa * f.upper);
        } else if constexpr (std::is_same_v<T, FloorSegment>) {
          return f.u;
        } else {
          const auto it = std::upper_bound(f.kappas.begin(), f.kappas.end(), kappa);
          const std::size_t k = it == f.kappas.begin() ? 0 : (it - f.kappas.begin()) - 1;
          return solve_region_equation(f.loss, f.sums, kappa, f.us[k]);
        }
      },
      form);
}

SolutionPath::SolutionPath(ClampProblem problem, double initial_u,
                           std::vector<PathSegment> segments, double terminal_kappa,
                           OpCounter ops)
    : problem_(std::move(problem)),
      initial_u_(initial_u),
      segments_(std::move(segments)),
      terminal_kappa_(terminal_kappa),
      ops_(ops) {
  const int p = problem_.dim();
  for (const auto& seg : segments_) {
    breakpoints_.push_back(seg.kappa_lo);
    regions_.push_back(seg.region);
  }
  if (std::isfinite(terminal_kappa_)) {
    breakpoints_.push_back(terminal_kappa_);
    regions_.push_back({0, p + 1});
  }
}

double SolutionPath::u_at(double kappa) const {
  require_valid_kappa(kappa);
  if (kappa >= terminal_kappa_) return problem_.tilde()[problem_.dim() - 1];
  auto it = std::upper_bound(segments_.begin(), segments_.end(), kappa,
                             [](double k, const PathSegment& s) { return k < s.kappa_lo; });
  if (it != segments_.begin()) --it;
  return it->u_at(kappa);
}

ClampedEigenSolution SolutionPath::eval(double kappa) const {
  require_valid_kappa(kappa);
  const int p = problem_.dim();
  ClampedEigenSolution out;
  out.kappa = kappa;
  if (kappa >= terminal_kappa_) {
    out.u_star = problem_.tilde()[p - 1];
    out.v_star = kappa * out.u_star;
    out.lambdas = problem_.tilde();
    out.region = {0, p + 1};
    out.constraint_active = false;
    return out;
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), kappa,
                             [](double k, const PathSegment& s) { return k < s.kappa_lo; });
  if (it != segments_.begin()) --it;
  out.u_star = it->u_at(kappa);
  out.v_star = kappa * out.u_star;
  out.lambdas = problem_.clamp(out.u_star, kappa);
  out.region = it->region;
  out.at_floor = std::holds_alternative<FloorSegment>(it->form);
  return out;
}

InitialPoint initial_point(const Eigen::VectorXd& d, const SpectralLoss& loss) {
  return initial_point_impl(ClampProblem(d, loss), nullptr);
}

SolutionPath gaussian_path(const Eigen::VectorXd& s) {
  if (s.size() < 1) throw InvalidInput("gaussian_path: empty spectrum");
  if (!(s.maxCoeff() > 0.0)) throw InvalidInput("gaussian_path: all sample eigenvalues are zero");
  if (s.minCoeff() < 0.0) throw InvalidInput("gaussian_path: negative sample eigenvalue");
  // f(S) = −S reverses the order: d sorted descending is −s read backwards.
  const Eigen::VectorXd d = -s.reverse();
  return build_closed_form(ClampProblem(d, SpectralLoss::gaussian()));
}

SolutionPath quadratic_path(const Eigen::VectorXd& d) {
  return build_closed_form(ClampProblem(d, SpectralLoss::quadratic()));
}

SolutionPath generic_path(const Eigen::VectorXd& d, const SpectralLoss& loss) {
  return build_numeric(ClampProblem(d, loss));
}

SolutionPath solution_path(const Eigen::VectorXd& d, const SpectralLoss& loss) {
  if (loss.kind() == LossKind::NuclearPair) return generic_path(d, loss);
  return build_closed_form(ClampProblem(d, loss));
}

}  // namespace condreg
