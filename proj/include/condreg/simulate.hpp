#pragma once

#include "condreg/spectral.hpp"

#include <cstdint>
#include <random>

namespace condreg {

/// 10 × 10 precision: unit diagonal, 0.99 on the (1,5) and (2,6) pairs
/// (1-based), zero elsewhere.
SymmetricMatrix make_illustration_precision();

/// Sampling request. The precision must be positive definite.
class SimSpec {
 public:
  SimSpec(int n, std::uint64_t seed, SymmetricMatrix precision);

  int p() const { return static_cast<int>(precision_.dim()); }
  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  const SymmetricMatrix& precision() const { return precision_; }

 private:
  int n_;
  std::uint64_t seed_;
  SymmetricMatrix precision_;
};

/// Standard normal stream: std::mt19937_64 (whose output sequence is fixed by
/// the C++ standard) feeding the Box–Muller transform. Uniforms are
/// ((x >> 11) + 1)·2⁻⁵³ ∈ (0, 1]; each pair of uniforms yields two normals,
/// cosine branch first.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  double uniform();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// n i.i.d. rows from N(0, Ω⁻¹): z ~ N(0, I), then Lᵀx = z with LLᵀ = Ω.
/// Row by row, entries drawn in column order.
DataMatrix sample_mvn(const SimSpec& spec);

}  // namespace condreg
