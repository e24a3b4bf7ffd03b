#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "rbd/errors.hpp"
#include "rbd/modem.hpp"

using namespace rbd;
using oracle::C;

namespace {

BitBlock label_bits(unsigned label, int nbits) {
  BitBlock b(static_cast<std::size_t>(nbits));
  for (int i = 0; i < nbits; ++i) b[i] = (label >> (nbits - 1 - i)) & 1u;
  return b;
}

int hamming(unsigned a, unsigned b) { return __builtin_popcount(a ^ b); }

}  // namespace

TEST_CASE("QamSpec") {
  CHECK_THROWS_AS(QamSpec(8), DomainError);
  CHECK_THROWS_AS(QamSpec(256), DomainError);
  CHECK(QamSpec(4).scale() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(QamSpec(16).scale() == doctest::Approx(1.0 / std::sqrt(10.0)));
  CHECK(QamSpec(64).scale() == doctest::Approx(1.0 / std::sqrt(42.0)));
  CHECK(QamSpec(64).bits_per_symbol() == 6);
}

TEST_CASE("constellation energy and levels") {
  for (int order : {4, 16, 64}) {
    const QamSpec q(order);
    const auto pts = q.constellation();
    REQUIRE(pts.size() == static_cast<std::size_t>(order));
    double e = 0.0;
    for (const C& p : pts) e += std::norm(p);
    CHECK(std::abs(e / order - 1.0) < 1e-12);
    // Integer PAM levels before scaling: odd values up to L-1.
    for (const C& p : pts) {
      const double re = p.real() / q.scale();
      const double im = p.imag() / q.scale();
      CHECK(std::abs(re - std::round(re)) < 1e-12);
      CHECK(static_cast<long>(std::round(std::abs(re))) % 2 == 1);
      CHECK(std::abs(im) <= q.levels_per_axis() - 1 + 1e-12);
    }
  }
  // 64-QAM: per-axis sum of squared levels over {±1,±3,±5,±7} is 168 = 8 * 21.
  const QamSpec q(64);
  double raw = 0.0;
  for (const C& p : q.constellation()) raw += std::norm(p) / (q.scale() * q.scale());
  CHECK(raw / 64 == doctest::Approx(42.0));
}

TEST_CASE("documented bit convention") {
  const QamSpec q(4);
  const double s = 1.0 / std::sqrt(2.0);
  // First bit drives I, second drives Q; 0 maps to the negative level.
  CHECK(std::abs(q.point(0b00) - C(-s, -s)) < 1e-15);
  CHECK(std::abs(q.point(0b10) - C(s, -s)) < 1e-15);
  CHECK(std::abs(q.point(0b01) - C(-s, s)) < 1e-15);
  CHECK(std::abs(q.point(0b11) - C(s, s)) < 1e-15);
  // 16-QAM in-phase Gray sequence from most negative: 00, 01, 11, 10.
  const QamSpec q16(16);
  const unsigned gray[4] = {0b00, 0b01, 0b11, 0b10};
  for (int i = 0; i < 4; ++i)
    CHECK(q16.point(gray[i] << 2).real() == doctest::Approx((2 * i - 3) * q16.scale()));
}

TEST_CASE("Gray property on every adjacent pair") {
  for (int order : {4, 16, 64}) {
    const QamSpec q(order);
    const auto pts = q.constellation();
    const double d = 2.0 * q.scale();
    for (unsigned a = 0; a < pts.size(); ++a)
      for (unsigned b = a + 1; b < pts.size(); ++b) {
        const C diff = pts[a] - pts[b];
        const bool horiz = std::abs(std::abs(diff.real()) - d) < 1e-9 && std::abs(diff.imag()) < 1e-9;
        const bool vert = std::abs(std::abs(diff.imag()) - d) < 1e-9 && std::abs(diff.real()) < 1e-9;
        if (horiz || vert) CHECK(hamming(a, b) == 1);
      }
  }
}

TEST_CASE("modulate / demodulate round trip") {
  for (int order : {4, 16, 64}) {
    const QamSpec q(order);
    BitBlock all;
    for (unsigned l = 0; l < static_cast<unsigned>(order); ++l) {
      const auto b = label_bits(l, q.bits_per_symbol());
      all.insert(all.end(), b.begin(), b.end());
    }
    const auto sym = qam_modulate(all, q);
    REQUIRE(sym.size() == static_cast<std::size_t>(order));
    for (unsigned l = 0; l < sym.size(); ++l) CHECK(sym[l] == q.point(l));
    CHECK(qam_demodulate_hard(sym, q) == all);
  }
  CHECK_THROWS_AS(qam_modulate(BitBlock(5), QamSpec(4)), DimensionError);
}

TEST_CASE("hard slicing") {
  const QamSpec q(64);
  const auto pts = q.constellation();
  oracle::Rng rng(31);
  SUBCASE("perturbation below half the minimum distance keeps the label") {
    const double half = q.scale();
    for (unsigned l = 0; l < pts.size(); ++l) {
      const double r = 0.99 * half * rng.uniform();
      const double ph = rng.uniform(0.0, 6.283185307179586);
      const ComplexVector y{pts[l] + std::polar(r, ph)};
      CHECK(qam_demodulate_hard(y, q) == label_bits(l, 6));
    }
  }
  SUBCASE("1e4 noisy symbols match brute-force nearest neighbour") {
    for (int order : {4, 16, 64}) {
      const QamSpec qq(order);
      const auto cp = qq.constellation();
      ComplexVector y(10000);
      for (auto& v : y) v = cp[rng.integer(0, order - 1)] + rng.cn(0.5);
      const BitBlock got = qam_demodulate_hard(y, qq);
      int mismatches = 0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        unsigned best = 0;
        for (unsigned l = 1; l < cp.size(); ++l)
          if (std::norm(y[i] - cp[l]) < std::norm(y[i] - cp[best])) best = l;
        const auto want = label_bits(best, qq.bits_per_symbol());
        if (!std::equal(want.begin(), want.end(), got.begin() + i * qq.bits_per_symbol())) ++mismatches;
      }
      CHECK(mismatches == 0);
    }
  }
}

TEST_CASE("awgn_add") {
  const ComplexVector x{C(1, 2), C(-3, 0.5)};
  CHECK(awgn_add(x, 0.0, 9) == x);
  CHECK_THROWS_AS(awgn_add(x, -1.0, 9), DomainError);
  CHECK(awgn_add(x, 1.0, 9) == awgn_add(x, 1.0, 9));

  const std::size_t n = 1000000;
  const auto y = awgn_add(ComplexVector(n), 2.0, 77);
  double sr = 0, si = 0, p = 0;
  for (const C& v : y) {
    sr += v.real();
    si += v.imag();
    p += std::norm(v);
  }
  CHECK(std::abs(sr / n) < 0.005);
  CHECK(std::abs(si / n) < 0.005);
  CHECK(p / n >= 1.99);
  CHECK(p / n <= 2.01);
}

TEST_CASE("random_bits") {
  const auto b = random_bits(100000, 3);
  CHECK(b == random_bits(100000, 3));
  const auto ones = std::accumulate(b.begin(), b.end(), 0L);
  CHECK(std::abs(ones - 50000) < 1000);
  for (auto v : b) CHECK(v <= 1);
}
