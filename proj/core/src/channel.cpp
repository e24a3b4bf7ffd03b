#include "rbd/channel.hpp"

#include <cmath>
#include <string>

#include "rbd/errors.hpp"
#include "rbd/random.hpp"

namespace rbd {

std::string_view to_string(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::Uncorrelated: return "uncorrelated";
    case ScenarioKind::UserCorrelated: return "user_correlated";
    case ScenarioKind::BsCorrelated: return "bs_correlated";
    case ScenarioKind::FullyCorrelated: return "fully_correlated";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "uncorrelated") return ScenarioKind::Uncorrelated;
  if (name == "user_correlated") return ScenarioKind::UserCorrelated;
  if (name == "bs_correlated") return ScenarioKind::BsCorrelated;
  if (name == "fully_correlated") return ScenarioKind::FullyCorrelated;
  throw DomainError("unknown scenario kind '" + std::string(name) + "'");
}

ChannelScenario ChannelScenario::uncorrelated() { return {}; }

ChannelScenario ChannelScenario::user_correlated(double zeta_t, double theta) {
  ChannelScenario s;
  s.kind = ScenarioKind::UserCorrelated;
  s.zeta_t = zeta_t;
  s.theta = theta;
  return s;
}

ChannelScenario ChannelScenario::bs_correlated(double zeta_r, double theta) {
  ChannelScenario s;
  s.kind = ScenarioKind::BsCorrelated;
  s.zeta_r = zeta_r;
  s.theta = theta;
  return s;
}

ChannelScenario ChannelScenario::fully_correlated(double zeta_t, double zeta_r, double theta) {
  ChannelScenario s;
  s.kind = ScenarioKind::FullyCorrelated;
  s.zeta_t = zeta_t;
  s.zeta_r = zeta_r;
  s.theta = theta;
  return s;
}

namespace {

void check_zeta(double zeta, const char* name) {
  if (!(zeta >= 0.0 && zeta < 1.0)) {
    throw DomainError(std::string(name) + " = " + std::to_string(zeta) + " is outside [0, 1)");
  }
}

void check_gains(const std::vector<double>& gains, const char* name) {
  for (double g : gains) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw DomainError(std::string(name) + " must be finite and > 0");
    }
  }
}

}  // namespace

void ChannelScenario::validate() const {
  check_zeta(zeta_t, "zeta_t");
  check_zeta(zeta_r, "zeta_r");
  check_gains(rx_gains, "rx_gains");
  check_gains(tx_gains, "tx_gains");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  switch (kind) {
    case ScenarioKind::Uncorrelated:
      if (zeta_t != 0.0 || zeta_r != 0.0)
        throw DomainError("uncorrelated scenario requires zeta_t = zeta_r = 0");
      break;
    case ScenarioKind::UserCorrelated:
      if (zeta_r != 0.0) throw DomainError("user_correlated scenario requires zeta_r = 0");
      break;
    case ScenarioKind::BsCorrelated:
      if (zeta_t != 0.0) throw DomainError("bs_correlated scenario requires zeta_t = 0");
      break;
    case ScenarioKind::FullyCorrelated:
      break;
  }
}

ComplexMatrix correlation_matrix(std::size_t dim, double zeta, double theta) {
  if (dim == 0) throw DimensionError("correlation_matrix: dim must be >= 1");
  check_zeta(zeta, "zeta");
  const Complex base = std::polar(zeta, theta);
  ComplexMatrix r(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    r(i, i) = 1.0;
    Complex p = 1.0;
    for (std::size_t k = i + 1; k < dim; ++k) {
      p *= base;
      r(i, k) = p;
      r(k, i) = std::conj(p);
    }
  }
  return r;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& r) {
  const auto eig = hermitian_eigen(r);
  const std::size_t n = r.rows();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (lambda < -1e-10) {
      throw DomainError("matrix_sqrt_psd: eigenvalue " + std::to_string(lambda) +
                        " below -1e-10, matrix is not PSD");
    }
    roots[k] = std::sqrt(std::max(lambda, 0.0));
  }
  // S = V diag(roots) V^H, filled on the lower triangle and mirrored.
  ComplexMatrix s(n, n);
  const auto& v = eig.vectors;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) {
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * roots[k] * std::conj(v(j, k));
      if (i == j) acc = acc.real();
      s(i, j) = acc;
      s(j, i) = std::conj(acc);
    }
  }
  return s;
}

ChannelGenerator::ChannelGenerator(std::size_t n, std::size_t m, ChannelScenario scenario)
    : n_(n), m_(m), scenario_(std::move(scenario)) {
  if (m_ < 1 || n_ < m_) {
    throw DimensionError("generate_channel: need N >= M >= 1 (N = " + std::to_string(n_) +
                         ", M = " + std::to_string(m_) + ")");
  }
  scenario_.validate();
  if (!scenario_.rx_gains.empty() && scenario_.rx_gains.size() != n_)
    throw DimensionError("rx_gains must have length N");
  if (!scenario_.tx_gains.empty() && scenario_.tx_gains.size() != m_)
    throw DimensionError("tx_gains must have length M");

  const bool rx_root = scenario_.kind == ScenarioKind::BsCorrelated ||
                       scenario_.kind == ScenarioKind::FullyCorrelated;
  const bool tx_root = scenario_.kind == ScenarioKind::UserCorrelated ||
                       scenario_.kind == ScenarioKind::FullyCorrelated;

  // A zero factor gives R = I, whose root is I; skip the product entirely.
  if (rx_root && scenario_.zeta_r > 0.0)
    rx_root_ = matrix_sqrt_psd(correlation_matrix(n_, scenario_.zeta_r, scenario_.theta));
  if (tx_root && scenario_.zeta_t > 0.0)
    tx_root_ = matrix_sqrt_psd(correlation_matrix(m_, scenario_.zeta_t, scenario_.theta));
  if (scenario_.kind == ScenarioKind::UserCorrelated) rx_diag_ = scenario_.rx_gains;
  if (scenario_.kind == ScenarioKind::BsCorrelated) tx_diag_ = scenario_.tx_gains;
}

ComplexMatrix ChannelGenerator::draw_iid(std::uint64_t seed) const {
  ComplexMatrix w(n_, m_);
  CounterRng rng(seed);
  fill_complex_normal({w.data(), w.size()}, rng, 1.0);
  return w;
}

ChannelRealization ChannelGenerator::generate(std::uint64_t seed) const {
  ComplexMatrix h = draw_iid(seed);
  if (rx_root_) h = multiply(*rx_root_, h);
  if (!rx_diag_.empty()) {
    for (std::size_t j = 0; j < m_; ++j)
      for (std::size_t i = 0; i < n_; ++i) h(i, j) *= rx_diag_[i];
  }
  if (tx_root_) h = multiply(h, *tx_root_);
  if (!tx_diag_.empty()) {
    for (std::size_t j = 0; j < m_; ++j)
      for (std::size_t i = 0; i < n_; ++i) h(i, j) *= tx_diag_[j];
  }
  return {std::move(h), scenario_, seed};
}

ChannelRealization generate_channel(std::size_t n, std::size_t m, const ChannelScenario& scenario,
                                    std::uint64_t seed) {
  return ChannelGenerator(n, m, scenario).generate(seed);
}

}  // namespace rbd
