#pragma once

#include <limits>
#include <string>

namespace condreg {

/// Extended reals are plain doubles; ±∞ use the IEEE infinities.
using ExtendedReal = double;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LossKind { Gaussian, Quadratic, NuclearPair };

struct LossDerivatives {
  double first;
  double second;
};

/// Separable, orthogonally invariant spectral loss l(λ), applied identically
/// to every eigenvalue.
///
///   Gaussian     l(λ) = −log λ                       (λ > 0)
///   Quadratic    l(λ) = λ²/2
///   NuclearPair  l(λ) = −log λ + η(wλ + (1 − w)/λ)   (λ > 0)
///
/// For NuclearPair, `penalty_weight` is η ≥ 0 and `mix_weight` is w ∈ [0, 1].
class SpectralLoss {
 public:
  static SpectralLoss gaussian() { return SpectralLoss(LossKind::Gaussian, 0.0, 0.0); }
  static SpectralLoss quadratic() { return SpectralLoss(LossKind::Quadratic, 0.0, 0.0); }
  static SpectralLoss nuclear_pair(double penalty_weight, double mix_weight);

  LossKind kind() const { return kind_; }
  double penalty_weight() const { return eta_; }
  double mix_weight() const { return mix_; }
  std::string name() const;

  bool in_domain(double lambda) const {
    return kind_ == LossKind::Quadratic || lambda > 0.0;
  }

  /// l(λ); +∞ outside the domain.
  ExtendedReal value(double lambda) const;

  /// (l′, l″) at λ. Throws DomainError outside the open domain.
  LossDerivatives derivatives(double lambda) const;

  /// argmin_{λ ≥ 0} l(λ) − dλ. Quadratic returns the raw stationary point d,
  /// even when negative; downstream clamping enforces positivity.
  ExtendedReal unconstrained_minimizer(double d) const;

  /// Generalized inverse of the non-decreasing map l′.
  ExtendedReal lprime_inverse(double y) const;

  /// sup_λ l′(λ): 0 for Gaussian, ηw for NuclearPair, +∞ for Quadratic.
  double lprime_supremum() const;

  // Unchecked derivative evaluation on the open domain.
  double lprime(double lambda) const;
  double lsecond(double lambda) const;

 private:
  SpectralLoss(LossKind kind, double eta, double mix) : kind_(kind), eta_(eta), mix_(mix) {}

  LossKind kind_;
  double eta_;
  double mix_;
};

}  // namespace condreg
