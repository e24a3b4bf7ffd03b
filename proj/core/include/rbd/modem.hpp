#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbd/linalg.hpp"

namespace rbd {

using BitBlock = std::vector<std::uint8_t>;

/// Square Gray-mapped QAM of order 4, 16 or 64, normalized to unit average energy.
///
/// Bit convention per symbol: the first half of the bits drive the in-phase
/// axis and the second half the quadrature axis, MSB first. On each axis the
/// bit pattern is the binary-reflected Gray code of the level index, with
/// index 0 (all-zero bits) at the most negative PAM level.
class QamSpec {
public:
  /// Throws DomainError for unsupported orders.
  explicit QamSpec(int order);

  int order() const noexcept { return order_; }
  int bits_per_symbol() const noexcept { return bits_per_symbol_; }
  int bits_per_axis() const noexcept { return bits_per_symbol_ / 2; }
  int levels_per_axis() const noexcept { return levels_; }
  /// Multiplier applied to the odd-integer PAM levels: 1/sqrt(2(L^2-1)/3).
  double scale() const noexcept { return scale_; }

  /// Constellation point with the given bit label (label bits MSB first).
  Complex point(unsigned label) const noexcept;
  /// All `order()` points indexed by label.
  std::vector<Complex> constellation() const;

private:
  int order_;
  int bits_per_symbol_;
  int levels_;
  double scale_;
};

ComplexVector qam_modulate(std::span<const std::uint8_t> bits, const QamSpec& spec);
BitBlock qam_demodulate_hard(const ComplexVector& symbols, const QamSpec& spec);

/// y = x + n with n ~ CN(0, sigma2 I), drawn from CounterRng(seed).
ComplexVector awgn_add(const ComplexVector& x, double sigma2, std::uint64_t seed);

/// Uniform random bits from CounterRng(seed).
BitBlock random_bits(std::size_t count, std::uint64_t seed);

}  // namespace rbd
