#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbd/channel.hpp"
#include "rbd/detect.hpp"
#include "rbd/modem.hpp"

namespace rbd {

/// Printed with every configuration and results file.
inline constexpr std::string_view kSnrConvention =
    "per-receive-antenna SNR: sigma2 = M / 10^(snr_db/10) with unit-energy symbols";

/// sigma2 = M / 10^(snr_db / 10). +inf dB gives 0.
double snr_to_sigma2(double snr_db, std::size_t m);

struct SimConfig {
  std::size_t n = 128;
  std::size_t m = 8;
  int qam_order = 64;
  Detector detector = Detector::Cholesky;
  int k_iterations = 4;
  ChannelScenario scenario;
  std::vector<double> snr_db_list;
  std::uint64_t target_bit_errors = 500;
  std::uint64_t max_bits = 20'000'000;
  std::uint64_t master_seed = 1;
  /// No point is reported from fewer frames than this.
  std::uint64_t min_frames = 10;

  /// Throws ConfigError on violated invariants.
  void validate() const;

  std::uint64_t bits_per_frame() const;

  bool operator==(const SimConfig&) const = default;
};

struct TrialOutcome {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
};

struct BerPoint {
  double snr_db = 0.0;
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  std::uint64_t frames = 0;
  /// Fewer than target_bit_errors errors when max_bits ran out.
  bool below_resolution = false;
  /// Set when the point aborted with an exception; counts are then partial.
  std::optional<std::string> error;

  bool operator==(const BerPoint&) const = default;
};

struct SweepResult {
  SimConfig config;
  std::vector<BerPoint> points;

  bool operator==(const SweepResult&) const = default;
};

/// Seed of trial `trial_index` at SNR point `snr_index`: derive_seed(master, snr_index, trial_index).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t snr_index, std::uint64_t trial_index);

/// Holds per-configuration state (channel roots, constellation) so frames are cheap.
class LinkSimulator {
public:
  explicit LinkSimulator(SimConfig config);

  /// One frame: bits -> QAM -> channel -> AWGN -> MMSE preprocessing -> detect -> slice.
  TrialOutcome run_trial(double snr_db, std::uint64_t seed) const;
  /// Like run_trial but returns the transmitted and detected bits.
  std::pair<BitBlock, BitBlock> run_trial_bits(double snr_db, std::uint64_t seed) const;

  BerPoint run_ber_point(std::size_t snr_index) const;

  const SimConfig& config() const noexcept { return config_; }

private:
  SimConfig config_;
  QamSpec qam_;
  ChannelGenerator channel_;
};

TrialOutcome run_trial(const SimConfig& config, double snr_db, std::uint64_t seed);
BerPoint run_ber_point(const SimConfig& config, std::size_t snr_index);

struct SweepOptions {
  /// Worker threads across SNR points; 0 = hardware concurrency, 1 = serial.
  unsigned threads = 0;
};

/// One BerPoint per configured SNR. Output is independent of thread count.
SweepResult run_sweep(const SimConfig& config, const SweepOptions& opts = {});

/// SNR (dB) at which the curve crosses `ber_level`, by linear interpolation of
/// log10(BER) between the first bracketing pair of points with non-zero BER.
std::optional<double> snr_at_ber(std::span<const BerPoint> points, double ber_level);

/// snr_at_ber(a) - snr_at_ber(b): positive when `a` needs more SNR than `b`.
std::optional<double> snr_gap(const SweepResult& a, const SweepResult& b, double ber_level);

// ---------------------------------------------------------------------------
// Results CSV. Rows follow the header
//   detector,k,N,M,qam,scenario,zeta_t,zeta_r,theta_rad,snr_db,bits,errors,ber,flag
// with flag in {ok, below_resolution, error}. Lines starting with '#' carry the
// per-sweep run parameters that have no column (seed, stopping rule) and the
// SNR convention; readers that skip comments see plain CSV.

inline constexpr std::string_view kResultsHeader =
    "detector,k,N,M,qam,scenario,zeta_t,zeta_r,theta_rad,snr_db,bits,errors,ber,flag";

void write_results(std::ostream& os, std::span<const SweepResult> results);
std::vector<SweepResult> read_results(std::istream& is);
void write_results(const std::filesystem::path& path, std::span<const SweepResult> results);
std::vector<SweepResult> read_results(const std::filesystem::path& path);

/// Per-sweep "snr_db,ber" blocks for external plotting.
void write_plot_data(std::ostream& os, std::span<const SweepResult> results);

// ---------------------------------------------------------------------------
// JSON configuration. Keys mirror SimConfig (N, M, qam_order, detector,
// k_iterations, scenario{kind, zeta_t, zeta_r, theta_rad, rx_gains, tx_gains},
// snr_db_list, target_bit_errors, max_bits, master_seed, min_frames).
// `detector` and `k_iterations` may also be arrays; the plan then expands to
// one SimConfig per (detector, k) pair, Cholesky appearing once.

struct SimPlan {
  SimConfig base;
  std::vector<Detector> detectors;
  std::vector<int> k_values;

  std::vector<SimConfig> expand() const;
};

/// Parses JSON text, applies "key=value" overrides (dotted keys reach into
/// `scenario`), then validates. Throws ConfigError naming the offending key.
SimPlan load_sim_plan(std::string_view json_text, std::span<const std::string> overrides = {});

/// Fully-resolved plan (all defaults filled in) plus the SNR convention, as JSON.
std::string describe_plan(const SimPlan& plan);

/// "lo:step:hi" inclusive range; throws ConfigError on malformed or empty ranges.
std::vector<double> parse_range(std::string_view text);

/// Deterministic synthetic MMSE problem: i.i.d. H (N x M), Gaussian s, AWGN of variance sigma2.
MmseProblem random_mmse_problem(std::size_t n, std::size_t m, double sigma2, std::uint64_t seed);

}  // namespace rbd
