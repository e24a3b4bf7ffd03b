#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "rbd/channel.hpp"
#include "rbd/errors.hpp"
#include "rbd/random.hpp"

using namespace rbd;
using oracle::C;

TEST_CASE("counter RNG") {
  CHECK(mix64(0) == 0);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));

  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CounterRng u(7);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK((x > 0.0 && x < 1.0));
  }
}

TEST_CASE("correlation_matrix") {
  SUBCASE("zeta 0 is the identity") { CHECK(correlation_matrix(3, 0.0, 0.0) == ComplexMatrix::identity(3)); }
  SUBCASE("real exponential model") {
    const auto r = correlation_matrix(3, 0.3, 0.0);
    const double want[3][3] = {{1, .3, .09}, {.3, 1, .3}, {.09, .3, 1}};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) CHECK(std::abs(r(i, k) - C(want[i][k])) < 1e-15);
  }
  SUBCASE("complex phase") {
    const auto r = correlation_matrix(2, 0.2, std::numbers::pi / 2);
    CHECK(std::abs(r(0, 1) - C(0, 0.2)) < 1e-15);
    CHECK(std::abs(r(1, 0) - C(0, -0.2)) < 1e-15);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(correlation_matrix(3, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(correlation_matrix(3, -0.1, 0.0), DomainError);
  }
  SUBCASE("Hermitian, unit diagonal, positive definite over the grid") {
    for (std::size_t dim : {1u, 2u, 7u, 32u, 64u})
      for (int z = 0; z <= 9; ++z)
        for (double th : {0.0, std::numbers::pi / 4, std::numbers::pi / 2}) {
          const auto r = correlation_matrix(dim, 0.1 * z, th);
          CHECK(hermitian_deviation(r) < 1e-12);
          for (std::size_t i = 0; i < dim; ++i) CHECK(r(i, i) == C(1.0));
          CHECK(hermitian_eigen_extrema(r).min > 0.0);
        }
  }
}

TEST_CASE("matrix_sqrt_psd") {
  CHECK(frobenius_norm(subtract(matrix_sqrt_psd(ComplexMatrix::identity(3)), ComplexMatrix::identity(3))) < 1e-14);
  const std::vector<double> d{4.0, 9.0};
  const auto s = matrix_sqrt_psd(ComplexMatrix::diagonal(d));
  CHECK(std::abs(s(0, 0) - C(2.0)) < 1e-14);
  CHECK(std::abs(s(1, 1) - C(3.0)) < 1e-14);
  CHECK(std::abs(s(0, 1)) < 1e-14);

  oracle::Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    // Rank-deficient PSD: H^H H with fewer rows than columns.
    const auto h = rng.mat(4, 6);
    const auto r = oracle::matmul(oracle::adjoint(h), h);
    const auto root = matrix_sqrt_psd(oracle::from_rows(r));
    CHECK(hermitian_deviation(root) < 1e-12);
    const auto sq = oracle::matmul(oracle::to_rows(root), oracle::to_rows(root));
    CHECK(oracle::frob(oracle::sub(sq, r)) <= 1e-10 * oracle::frob(r));
  }
  const std::vector<double> neg{1.0, -1e-3};
  CHECK_THROWS_AS(matrix_sqrt_psd(ComplexMatrix::diagonal(neg)), DomainError);
}

TEST_CASE("scenario invariants") {
  CHECK_NOTHROW(ChannelScenario::fully_correlated(0.2, 0.3).validate());
  ChannelScenario s = ChannelScenario::uncorrelated();
  s.zeta_t = 0.1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = ChannelScenario::user_correlated(0.2);
  s.zeta_r = 0.1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = ChannelScenario::bs_correlated(0.2);
  s.zeta_t = 0.1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  CHECK_THROWS_AS(ChannelScenario::fully_correlated(1.0, 0.0).validate(), DomainError);
  s = ChannelScenario::user_correlated(0.2);
  s.rx_gains = {1.0, 0.0};
  CHECK_THROWS_AS(s.validate(), DomainError);

  for (auto k : {ScenarioKind::Uncorrelated, ScenarioKind::UserCorrelated, ScenarioKind::BsCorrelated,
                 ScenarioKind::FullyCorrelated})
    CHECK(parse_scenario_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_scenario_kind("diagonal"), DomainError);
}

TEST_CASE("generate_channel") {
  SUBCASE("shape, reproducibility and invalid dimensions") {
    const auto a = generate_channel(16, 4, ChannelScenario::uncorrelated(), 5);
    const auto b = generate_channel(16, 4, ChannelScenario::uncorrelated(), 5);
    const auto c = generate_channel(16, 4, ChannelScenario::uncorrelated(), 6);
    CHECK(a.h.rows() == 16);
    CHECK(a.h.cols() == 4);
    CHECK(a.h == b.h);
    CHECK_FALSE(a.h == c.h);
    CHECK(a.seed == 5);
    CHECK_THROWS_AS(generate_channel(3, 4, ChannelScenario::uncorrelated(), 1), DimensionError);
    CHECK_THROWS_AS(generate_channel(3, 0, ChannelScenario::uncorrelated(), 1), DimensionError);
  }

  SUBCASE("i.i.d. moments over 1e5 draws of a 4x2 block") {
    const ChannelGenerator gen(4, 2, ChannelScenario::uncorrelated());
    const int draws = 100000;
    std::vector<C> mean(8);
    std::vector<double> var(8);
    for (int d = 0; d < draws; ++d) {
      const auto h = gen.generate(static_cast<std::uint64_t>(d)).h;
      for (std::size_t e = 0; e < 8; ++e) {
        mean[e] += h.data()[e];
        var[e] += std::norm(h.data()[e]);
      }
    }
    for (std::size_t e = 0; e < 8; ++e) {
      const C mu = mean[e] / double(draws);
      CHECK(std::abs(mu.real()) <= 0.02);
      CHECK(std::abs(mu.imag()) <= 0.02);
      const double v = var[e] / draws - std::norm(mu);
      CHECK(v >= 0.98);
      CHECK(v <= 1.02);
    }
  }

  SUBCASE("user-correlated with identity gains is W R_t^{1/2}") {
    const auto sc = ChannelScenario::user_correlated(0.4, 0.3);
    const ChannelGenerator gen(8, 4, sc);
    const auto w = gen.draw_iid(99);
    const auto rt = matrix_sqrt_psd(correlation_matrix(4, 0.4, 0.3));
    const auto want = oracle::matmul(oracle::to_rows(w), oracle::to_rows(rt));
    CHECK(oracle::frob(oracle::sub(oracle::to_rows(gen.generate(99).h), want)) < 1e-12);
  }

  SUBCASE("bs-correlated with gains is R_r^{1/2} W D_t") {
    auto sc = ChannelScenario::bs_correlated(0.3);
    sc.tx_gains = {1.0, 2.0, 0.5};
    const ChannelGenerator gen(5, 3, sc);
    const auto w = oracle::to_rows(gen.draw_iid(4));
    oracle::Mat dt(3, oracle::Vec(3));
    for (int i = 0; i < 3; ++i) dt[i][i] = sc.tx_gains[i];
    const auto rr = oracle::to_rows(matrix_sqrt_psd(correlation_matrix(5, 0.3, 0.0)));
    const auto want = oracle::matmul(oracle::matmul(rr, w), dt);
    CHECK(oracle::frob(oracle::sub(oracle::to_rows(gen.generate(4).h), want)) < 1e-12);
  }

  SUBCASE("fully correlated with zero factors equals uncorrelated") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      CHECK(generate_channel(12, 3, ChannelScenario::fully_correlated(0.0, 0.0), seed).h ==
            generate_channel(12, 3, ChannelScenario::uncorrelated(), seed).h);
    }
  }

  SUBCASE("Kronecker covariance of vec(H), 2x2, 1e5 draws") {
    const double zt = 0.2, zr = 0.3;
    const ChannelGenerator gen(2, 2, ChannelScenario::fully_correlated(zt, zr));
    const auto rt = correlation_matrix(2, zt, 0.0);
    const auto rr = correlation_matrix(2, zr, 0.0);
    oracle::Mat cov(4, oracle::Vec(4));
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) {
      const auto h = gen.generate(static_cast<std::uint64_t>(d) + 1000000).h;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) cov[a][b] += h.data()[a] * std::conj(h.data()[b]);
    }
    // E[vec(H) vec(H)^H] = R_t^T (x) R_r with vec stacking columns.
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const C want = rt(b / 2, a / 2) * rr(a % 2, b % 2);
        CHECK(std::abs(cov[a][b] / double(draws) - want) <= 0.03);
      }
  }
}
