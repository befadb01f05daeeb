#pragma once

#include "condreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace condreg::detail {

/// Root of a continuous increasing function on (0, ∞), known to change sign
/// there. Newton steps are kept inside a maintained bracket; bisection takes
/// over when a step would leave it. Stops when |f| ≤ ftol or the bracket has
/// collapsed to a few ulps.
template <class F, class DF>
double increasing_root(F&& f, DF&& df, double x0, double ftol, const char* what) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  double x = (x0 > 0.0 && std::isfinite(x0)) ? x0 : 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2200; ++k) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      if (std::isfinite(hi)) break;
      x *= 2.0;
    } else {
      hi = x;
      if (lo > 0.0) break;
      x *= 0.5;
    }
    if (!std::isfinite(x) || x == 0.0) break;
  }
  if (!(lo > 0.0) || !std::isfinite(hi)) {
    throw NumericalError(std::string(what) + ": failed to bracket root");
  }
  x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double fx = f(x);
    if (std::abs(fx) <= ftol) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * kEps * hi) return 0.5 * (lo + hi);
    double next = x - fx / df(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace condreg::detail
