#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbd/linalg.hpp"

namespace rbd {

enum class ScenarioKind { Uncorrelated, UserCorrelated, BsCorrelated, FullyCorrelated };

std::string_view to_string(ScenarioKind kind) noexcept;
/// Accepts "uncorrelated", "user_correlated", "bs_correlated", "fully_correlated".
ScenarioKind parse_scenario_kind(std::string_view name);

/// Spatial-correlation configuration of the Kronecker channel.
///
/// `rx_gains` / `tx_gains` are the diagonal D_r (length N) and D_t (length M)
/// used by the user- and BS-correlated scenarios; empty means identity.
struct ChannelScenario {
  ScenarioKind kind = ScenarioKind::Uncorrelated;
  double zeta_t = 0.0;
  double zeta_r = 0.0;
  double theta = 0.0;
  std::vector<double> rx_gains;
  std::vector<double> tx_gains;

  static ChannelScenario uncorrelated();
  static ChannelScenario user_correlated(double zeta_t, double theta = 0.0);
  static ChannelScenario bs_correlated(double zeta_r, double theta = 0.0);
  static ChannelScenario fully_correlated(double zeta_t, double zeta_r, double theta = 0.0);

  /// Throws DomainError if a factor is outside [0, 1), a gain is not positive,
  /// or a zeta that the kind pins to zero is non-zero.
  void validate() const;

  bool operator==(const ChannelScenario&) const = default;
};

struct ChannelRealization {
  ComplexMatrix h;  ///< N x M
  ChannelScenario scenario;
  std::uint64_t seed = 0;
};

/// R(i,k) = (zeta e^{j theta})^{k-i} for i <= k, Hermitian mirror below.
ComplexMatrix correlation_matrix(std::size_t dim, double zeta, double theta);

/// Hermitian principal square root of a PSD matrix via eigen-decomposition.
/// Eigenvalues in [-1e-10, 0] are clamped to zero; below that, DomainError.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& r);

/// Draws channel realizations for a fixed (N, M, scenario). The correlation
/// roots are computed once at construction; generate() is const and may be
/// called concurrently.
class ChannelGenerator {
public:
  ChannelGenerator(std::size_t n, std::size_t m, ChannelScenario scenario);

  ChannelRealization generate(std::uint64_t seed) const;

  /// The i.i.d. factor W for `seed`: unit-variance circular Gaussian entries
  /// drawn column-major from CounterRng(seed).
  ComplexMatrix draw_iid(std::uint64_t seed) const;

  std::size_t rx_antennas() const noexcept { return n_; }
  std::size_t users() const noexcept { return m_; }
  const ChannelScenario& scenario() const noexcept { return scenario_; }

private:
  std::size_t n_;
  std::size_t m_;
  ChannelScenario scenario_;
  std::optional<ComplexMatrix> rx_root_;  // left factor when correlated
  std::optional<ComplexMatrix> tx_root_;  // right factor when correlated
  std::vector<double> rx_diag_;           // left diagonal when set
  std::vector<double> tx_diag_;           // right diagonal when set
};

ChannelRealization generate_channel(std::size_t n, std::size_t m, const ChannelScenario& scenario,
                                    std::uint64_t seed);

}  // namespace rbd
