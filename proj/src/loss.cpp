#include "condreg/loss.hpp"

#include "condreg/detail/root.hpp"
#include "condreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace condreg {

SpectralLoss SpectralLoss::nuclear_pair(double penalty_weight, double mix_weight) {
  if (!(penalty_weight >= 0.0) || !std::isfinite(penalty_weight)) {
    throw InvalidInput("nuclear_pair: penalty weight must be finite and >= 0");
  }
  if (!(mix_weight >= 0.0 && mix_weight <= 1.0)) {
    throw InvalidInput("nuclear_pair: mix weight must lie in [0, 1]");
  }
  return SpectralLoss(LossKind::NuclearPair, penalty_weight, mix_weight);
}

std::string SpectralLoss::name() const {
  switch (kind_) {
    case LossKind::Gaussian:
      return "gaussian";
    case LossKind::Quadratic:
      return "quadratic";
    case LossKind::NuclearPair: {
      std::ostringstream os;
      os << "nuclear(eta=" << eta_ << ", mix=" << mix_ << ")";
      return os.str();
    }
  }
  return "unknown";
}

ExtendedReal SpectralLoss::value(double lambda) const {
  switch (kind_) {
    case LossKind::Gaussian:
      return lambda > 0.0 ? -std::log(lambda) : kInfinity;
    case LossKind::Quadratic:
      return 0.5 * lambda * lambda;
    case LossKind::NuclearPair:
      if (!(lambda > 0.0)) return kInfinity;
      return -std::log(lambda) + eta_ * (mix_ * lambda + (1.0 - mix_) / lambda);
  }
  return kInfinity;
}

double SpectralLoss::lprime(double lambda) const {
  switch (kind_) {
    case LossKind::Gaussian:
      return -1.0 / lambda;
    case LossKind::Quadratic:
      return lambda;
    case LossKind::NuclearPair:
      return -1.0 / lambda + eta_ * mix_ - eta_ * (1.0 - mix_) / (lambda * lambda);
  }
  return 0.0;
}

double SpectralLoss::lsecond(double lambda) const {
  switch (kind_) {
    case LossKind::Gaussian:
      return 1.0 / (lambda * lambda);
    case LossKind::Quadratic:
      return 1.0;
    case LossKind::NuclearPair:
      return 1.0 / (lambda * lambda) + 2.0 * eta_ * (1.0 - mix_) / (lambda * lambda * lambda);
  }
  return 0.0;
}

LossDerivatives SpectralLoss::derivatives(double lambda) const {
  if (!in_domain(lambda) || !std::isfinite(lambda)) {
    std::ostringstream os;
    os << name() << ": lambda = " << lambda << " outside the open domain";
    throw DomainError(os.str());
  }
  return {lprime(lambda), lsecond(lambda)};
}

double SpectralLoss::lprime_supremum() const {
  switch (kind_) {
    case LossKind::Gaussian:
      return 0.0;
    case LossKind::Quadratic:
      return kInfinity;
    case LossKind::NuclearPair:
      return eta_ * mix_;
  }
  return kInfinity;
}

ExtendedReal SpectralLoss::lprime_inverse(double y) const {
  switch (kind_) {
    case LossKind::Gaussian:
      return y < 0.0 ? -1.0 / y : kInfinity;
    case LossKind::Quadratic:
      return y;
    case LossKind::NuclearPair:
      if (y >= lprime_supremum()) return kInfinity;
      if (eta_ == 0.0) return -1.0 / y;
      return detail::increasing_root([&](double x) { return lprime(x) - y; },
                                     [&](double x) { return lsecond(x); },
                                     std::max(1.0, 1.0 / (lprime_supremum() - y)),
                                     1e-14 * (1.0 + std::abs(y)), "lprime_inverse");
  }
  return kInfinity;
}

ExtendedReal SpectralLoss::unconstrained_minimizer(double d) const {
  // l is convex with l′ → −∞ at 0 for the barrier losses, so the minimizer of
  // l(λ) − dλ is the point where l′ reaches d.
  return lprime_inverse(d);
}

}  // namespace condreg
