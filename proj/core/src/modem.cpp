#include "rbd/modem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbd/errors.hpp"
#include "rbd/random.hpp"

namespace rbd {

namespace {

constexpr unsigned gray_encode(unsigned i) noexcept { return i ^ (i >> 1); }

constexpr unsigned gray_decode(unsigned g) noexcept {
  unsigned i = 0;
  for (; g != 0; g >>= 1) i ^= g;
  return i;
}

unsigned read_label(std::span<const std::uint8_t> bits, int count) {
  unsigned v = 0;
  for (int b = 0; b < count; ++b) v = (v << 1) | (bits[static_cast<std::size_t>(b)] & 1u);
  return v;
}

void write_label(unsigned v, int count, std::uint8_t* out) {
  for (int b = count - 1; b >= 0; --b) {
    out[b] = static_cast<std::uint8_t>(v & 1u);
    v >>= 1;
  }
}

}  // namespace

QamSpec::QamSpec(int order) : order_(order) {
  switch (order) {
    case 4: bits_per_symbol_ = 2; break;
    case 16: bits_per_symbol_ = 4; break;
    case 64: bits_per_symbol_ = 6; break;
    default: throw DomainError("unsupported QAM order " + std::to_string(order));
  }
  levels_ = 1 << (bits_per_symbol_ / 2);
  // Mean of squared odd levels (2i - (L-1))^2 over L values is (L^2 - 1)/3 per axis.
  scale_ = 1.0 / std::sqrt(2.0 * (levels_ * levels_ - 1) / 3.0);
}

Complex QamSpec::point(unsigned label) const noexcept {
  const int half = bits_per_axis();
  const unsigned mask = (1u << half) - 1u;
  const unsigned gi = (label >> half) & mask;
  const unsigned gq = label & mask;
  const auto level = [&](unsigned g) {
    return static_cast<double>(2 * static_cast<int>(gray_decode(g)) - (levels_ - 1));
  };
  return {level(gi) * scale_, level(gq) * scale_};
}

std::vector<Complex> QamSpec::constellation() const {
  std::vector<Complex> pts(static_cast<std::size_t>(order_));
  for (unsigned l = 0; l < pts.size(); ++l) pts[l] = point(l);
  return pts;
}

ComplexVector qam_modulate(std::span<const std::uint8_t> bits, const QamSpec& spec) {
  const auto bps = static_cast<std::size_t>(spec.bits_per_symbol());
  if (bits.size() % bps != 0) {
    throw DimensionError("qam_modulate: " + std::to_string(bits.size()) +
                         " bits is not a multiple of " + std::to_string(bps));
  }
  ComplexVector out(bits.size() / bps);
  for (std::size_t s = 0; s < out.size(); ++s)
    out[s] = spec.point(read_label(bits.subspan(s * bps, bps), spec.bits_per_symbol()));
  return out;
}

BitBlock qam_demodulate_hard(const ComplexVector& symbols, const QamSpec& spec) {
  const int half = spec.bits_per_axis();
  const int top = spec.levels_per_axis() - 1;
  // Nearest odd level per axis: index = round((x/scale + L - 1) / 2), clamped.
  const auto slice = [&](double x) -> unsigned {
    const double idx = std::floor((x / spec.scale() + top) / 2.0 + 0.5);
    return static_cast<unsigned>(std::clamp(idx, 0.0, static_cast<double>(top)));
  };
  BitBlock bits(symbols.size() * static_cast<std::size_t>(spec.bits_per_symbol()));
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    std::uint8_t* out = bits.data() + s * static_cast<std::size_t>(spec.bits_per_symbol());
    write_label(gray_encode(slice(symbols[s].real())), half, out);
    write_label(gray_encode(slice(symbols[s].imag())), half, out + half);
  }
  return bits;
}

ComplexVector awgn_add(const ComplexVector& x, double sigma2, std::uint64_t seed) {
  if (!(sigma2 >= 0.0) || std::isinf(sigma2)) throw DomainError("awgn_add: sigma2 must be finite and >= 0");
  ComplexVector y = x;
  if (sigma2 == 0.0) return y;
  CounterRng rng(seed);
  for (auto& v : y) v += rng.complex_normal(sigma2);
  return y;
}

BitBlock random_bits(std::size_t count, std::uint64_t seed) {
  BitBlock bits(count);
  CounterRng rng(seed);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    bits[i] = static_cast<std::uint8_t>(word & 1u);
    word >>= 1;
  }
  return bits;
}

}  // namespace rbd
