#include "rbd/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rbd/errors.hpp"
#include "rbd/random.hpp"

namespace rbd {

namespace {

// Sub-stream tags inside one trial.
constexpr std::uint64_t kBitsTag = 1;
constexpr std::uint64_t kChannelTag = 2;
constexpr std::uint64_t kNoiseTag = 3;

}  // namespace

double snr_to_sigma2(double snr_db, std::size_t m) {
  if (std::isnan(snr_db)) throw DomainError("snr_db is NaN");
  return static_cast<double>(m) / std::pow(10.0, snr_db / 10.0);
}

void SimConfig::validate() const {
  if (m < 1) throw ConfigError("M must be >= 1");
  if (n < m) throw ConfigError("N must be >= M");
  if (qam_order != 4 && qam_order != 16 && qam_order != 64)
    throw ConfigError("qam_order must be 4, 16 or 64");
  if (detector != Detector::Cholesky && k_iterations < 1)
    throw ConfigError("k_iterations must be >= 1 for iterative detectors");
  if (snr_db_list.empty()) throw ConfigError("snr_db_list is empty");
  for (std::size_t i = 0; i < snr_db_list.size(); ++i) {
    if (!std::isfinite(snr_db_list[i])) throw ConfigError("snr_db_list entries must be finite");
    if (i > 0 && !(snr_db_list[i] > snr_db_list[i - 1]))
      throw ConfigError("snr_db_list must be strictly increasing");
  }
  if (target_bit_errors < 1) throw ConfigError("target_bit_errors must be >= 1");
  if (min_frames < 1) throw ConfigError("min_frames must be >= 1");
  if (max_bits < bits_per_frame() * min_frames)
    throw ConfigError("max_bits must cover at least min_frames frames");
  try {
    scenario.validate();
    if (!scenario.rx_gains.empty() && scenario.rx_gains.size() != n)
      throw DomainError("rx_gains must have N entries");
    if (!scenario.tx_gains.empty() && scenario.tx_gains.size() != m)
      throw DomainError("tx_gains must have M entries");
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

std::uint64_t SimConfig::bits_per_frame() const {
  return static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(QamSpec(qam_order).bits_per_symbol());
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t snr_index, std::uint64_t trial_index) {
  return derive_seed(master_seed, snr_index, trial_index);
}

LinkSimulator::LinkSimulator(SimConfig config)
    : config_((config.validate(), std::move(config))),
      qam_(config_.qam_order),
      channel_(config_.n, config_.m, config_.scenario) {}

std::pair<BitBlock, BitBlock> LinkSimulator::run_trial_bits(double snr_db, std::uint64_t seed) const {
  const double sigma2 = snr_to_sigma2(snr_db, config_.m);
  BitBlock bits = random_bits(config_.bits_per_frame(), derive_seed(seed, kBitsTag));
  const ComplexVector s = qam_modulate(bits, qam_);
  const ComplexMatrix h = channel_.generate(derive_seed(seed, kChannelTag)).h;
  const ComplexVector y = awgn_add(matvec(h, s), sigma2, derive_seed(seed, kNoiseTag));
  const MmseProblem prob = preprocess(h, y, sigma2);
  const DetectionResult r = detect(config_.detector, prob, config_.k_iterations);
  return {std::move(bits), qam_demodulate_hard(r.s_hat, qam_)};
}

TrialOutcome LinkSimulator::run_trial(double snr_db, std::uint64_t seed) const {
  const auto [tx, rx] = run_trial_bits(snr_db, seed);
  TrialOutcome out;
  out.bits = tx.size();
  for (std::size_t i = 0; i < tx.size(); ++i) out.bit_errors += tx[i] != rx[i];
  return out;
}

BerPoint LinkSimulator::run_ber_point(std::size_t snr_index) const {
  if (snr_index >= config_.snr_db_list.size()) throw DimensionError("run_ber_point: SNR index out of range");
  BerPoint p;
  p.snr_db = config_.snr_db_list[snr_index];
  const std::uint64_t frame_bits = config_.bits_per_frame();
  try {
    while (true) {
      const bool enough_errors = p.bit_errors >= config_.target_bit_errors;
      if (enough_errors && p.frames >= config_.min_frames) break;
      if (p.bits_sent + frame_bits > config_.max_bits) break;
      const TrialOutcome t = run_trial(p.snr_db, trial_seed(config_.master_seed, snr_index, p.frames));
      p.bits_sent += t.bits;
      p.bit_errors += t.bit_errors;
      ++p.frames;
    }
  } catch (const std::exception& e) {
    p.error = e.what();
  }
  p.ber = p.bits_sent > 0 ? static_cast<double>(p.bit_errors) / static_cast<double>(p.bits_sent) : 0.0;
  p.below_resolution = !p.error && p.bit_errors < config_.target_bit_errors;
  return p;
}

TrialOutcome run_trial(const SimConfig& config, double snr_db, std::uint64_t seed) {
  return LinkSimulator(config).run_trial(snr_db, seed);
}

BerPoint run_ber_point(const SimConfig& config, std::size_t snr_index) {
  return LinkSimulator(config).run_ber_point(snr_index);
}

SweepResult run_sweep(const SimConfig& config, const SweepOptions& opts) {
  const LinkSimulator sim(config);
  const std::size_t npts = config.snr_db_list.size();
  SweepResult result{config, std::vector<BerPoint>(npts)};

  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, npts));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < npts; i = next++) result.points[i] = sim.run_ber_point(i);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return result;
}

std::optional<double> snr_at_ber(std::span<const BerPoint> points, double ber_level) {
  if (!(ber_level > 0.0)) throw DomainError("snr_at_ber: level must be positive");
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const BerPoint& a = points[i];
    const BerPoint& b = points[i + 1];
    if (a.error || b.error || a.ber <= 0.0 || b.ber <= 0.0) continue;
    if (a.ber >= ber_level && b.ber <= ber_level) {
      const double la = std::log10(a.ber);
      const double lb = std::log10(b.ber);
      if (la == lb) return a.snr_db;
      const double t = (la - std::log10(ber_level)) / (la - lb);
      return a.snr_db + t * (b.snr_db - a.snr_db);
    }
  }
  return std::nullopt;
}

std::optional<double> snr_gap(const SweepResult& a, const SweepResult& b, double ber_level) {
  const auto sa = snr_at_ber(a.points, ber_level);
  const auto sb = snr_at_ber(b.points, ber_level);
  if (!sa || !sb) return std::nullopt;
  return *sa - *sb;
}

MmseProblem random_mmse_problem(std::size_t n, std::size_t m, double sigma2, std::uint64_t seed) {
  if (m < 1 || n < m) throw DimensionError("random_mmse_problem: need N >= M >= 1");
  CounterRng rng(derive_seed(seed, 0xa11ce));
  ComplexMatrix h(n, m);
  fill_complex_normal(std::span<Complex>(h.data(), h.size()), rng);
  ComplexVector s(m);
  fill_complex_normal(s.span(), rng);
  const ComplexVector y = awgn_add(matvec(h, s), sigma2, derive_seed(seed, 0x5eed));
  return preprocess(h, y, sigma2);
}

}  // namespace rbd
