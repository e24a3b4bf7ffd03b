#pragma once

#include <cstdint>

namespace rbd {

/// Per-invocation accumulator of complex-valued arithmetic.
///
/// Every primitive in linalg and the detector kernels takes an optional
/// `OpCounter*` and, when non-null, adds exactly the scalar operations it
/// performed. Counting convention: one complex multiplication = 1 mult;
/// divisions and square roots are counted as one mult each; multiplying by a
/// real scalar is still one mult. Conjugation is free.
struct OpCounter {
  std::uint64_t adds = 0;
  std::uint64_t mults = 0;
  std::uint64_t matvecs = 0;  ///< calls to matvec() (matrix-vector products)

  void add(std::uint64_t n) noexcept { adds += n; }
  void mul(std::uint64_t n) noexcept { mults += n; }
};

inline void count_adds(OpCounter* c, std::uint64_t n) noexcept {
  if (c != nullptr) c->add(n);
}

inline void count_mults(OpCounter* c, std::uint64_t n) noexcept {
  if (c != nullptr) c->mul(n);
}

}  // namespace rbd
