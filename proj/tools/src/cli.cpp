#include "rbd_cli/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rbd/complexity.hpp"
#include "rbd/errors.hpp"
#include "rbd/random.hpp"
#include "rbd/sim.hpp"
#include "rbd_cli/selftest.hpp"

namespace rbd::cli {

namespace {

struct SimulateArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string plot_path;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

struct ComplexityArgs {
  std::string m_range = "4:4:64";
  int k = 3;
  std::size_t n = 128;
  std::uint64_t seed = 1;
  std::string baseline = "inversion";
  std::string out_path;
};

struct SelftestArgs {
  std::uint64_t seed = 1;
  std::string fault = "none";
};

void echo(std::ostream& out, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out << "# " << line << '\n';
}

std::vector<std::string> split_overrides(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    std::size_t start = 0;
    while (start <= r.size()) {
      const auto pos = r.find(',', start);
      const auto piece = r.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
      if (!piece.empty()) out.push_back(piece);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return out;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  std::string text = "{}";
  if (!args.config_path.empty()) {
    std::ifstream is(args.config_path);
    if (!is) {
      err << "error: cannot read config file '" << args.config_path << "'\n";
      return kUsageError;
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  std::vector<std::string> overrides = split_overrides(args.overrides);
  if (args.k) overrides.push_back("k_iterations=" + std::to_string(*args.k));
  if (args.seed) overrides.push_back("master_seed=" + std::to_string(*args.seed));

  SimPlan plan;
  try {
    plan = load_sim_plan(text, overrides);
  } catch (const ConfigError& e) {
    err << "config error";
    if (!args.config_path.empty()) err << " in '" << args.config_path << "'";
    err << ": " << e.what() << '\n';
    return kUsageError;
  }
  out << "# resolved configuration\n";
  echo(out, describe_plan(plan));

  std::vector<SweepResult> results;
  bool point_failed = false;
  for (const SimConfig& cfg : plan.expand()) {
    results.push_back(run_sweep(cfg, {args.threads}));
    for (const auto& p : results.back().points) {
      out << "# point " << to_string(cfg.detector) << " k=" << cfg.k_iterations << " snr_db=" << p.snr_db
          << " frames=" << p.frames << " bits=" << p.bits_sent << " errors=" << p.bit_errors << " ber=" << p.ber
          << (p.error ? " error" : p.below_resolution ? " below_resolution" : "") << '\n';
      if (p.error) {
        err << "error: " << to_string(cfg.detector) << " at " << p.snr_db << " dB: " << *p.error << '\n';
        point_failed = true;
      }
    }
  }
  if (args.out_path.empty()) {
    write_results(out, results);
  } else {
    write_results(std::filesystem::path(args.out_path), results);
    out << "# wrote " << args.out_path << '\n';
  }
  if (!args.plot_path.empty()) {
    std::ofstream os(args.plot_path);
    if (!os) throw std::runtime_error("cannot open '" + args.plot_path + "' for writing");
    write_plot_data(os, results);
  }
  return point_failed ? kRuntimeFailure : kSuccess;
}

int cmd_complexity(const ComplexityArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<std::uint64_t> ms;
  BaselineConvention convention{};
  try {
    for (double v : parse_range(args.m_range)) {
      if (v < 1.0 || v != std::floor(v)) throw ConfigError("M values must be positive integers");
      ms.push_back(static_cast<std::uint64_t>(v));
    }
    if (args.k < 1) throw ConfigError("k must be >= 1");
    if (args.n < ms.back()) throw ConfigError("N must be >= the largest M");
    convention = parse_baseline(args.baseline);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  out << "# complexity: M=" << args.m_range << " k=" << args.k << " N=" << args.n << " seed=" << args.seed
      << " baseline=" << to_string(convention) << " sigma2=0.1\n";
  out << "# " << kSnrConvention << '\n';
  std::vector<CostReport> reports;
  for (Detector alg : {Detector::Minres, Detector::Gmres, Detector::Cr}) {
    for (std::uint64_t m : ms) {
      const MmseProblem prob = random_mmse_problem(args.n, m, 0.1, derive_seed(args.seed, m));
      reports.push_back(make_cost_report(alg, prob, args.k, convention));
    }
  }
  if (args.out_path.empty()) {
    write_complexity_csv(out, reports);
  } else {
    std::ofstream os(args.out_path);
    if (!os) throw std::runtime_error("cannot open '" + args.out_path + "' for writing");
    write_complexity_csv(os, reports);
    out << "# wrote " << args.out_path << '\n';
  }
  return kSuccess;
}

int cmd_selftest(const SelftestArgs& args, std::ostream& out, std::ostream& err) {
  SelftestOptions opts;
  opts.seed = args.seed;
  if (args.fault == "minres-alpha-sign") {
    opts.fault = Fault::MinresAlphaSign;
  } else if (args.fault != "none") {
    err << "usage error: unknown fault '" << args.fault << "'\n";
    return kUsageError;
  }
  out << "# selftest: seed=" << opts.seed << " instances=" << opts.instances << " fault=" << args.fault << '\n';
  out << "# " << kSnrConvention << '\n';
  return report_selftest(run_selftest(opts), out) ? kSuccess : kRuntimeFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Massive-MIMO MMSE detection: BER simulation and complexity accounting", "rbd"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BER sweep; CSV results");
  simulate->add_option("--config", sim.config_path, "JSON configuration file");
  simulate->add_option("--override", sim.overrides, "K=V[,K=V...] applied after the file");
  simulate->add_option("--out", sim.out_path, "results CSV (default stdout)");
  simulate->add_option("--plot-data", sim.plot_path, "write snr_db,ber blocks here");
  simulate->add_option("--k", sim.k, "k_iterations");
  simulate->add_option("--seed", sim.seed, "master_seed");
  simulate->add_option("--threads", sim.threads, "worker threads across SNR points (0 = auto)");

  ComplexityArgs cx;
  auto* complexity = app.add_subcommand("complexity", "Analytic and measured operation counts; CSV");
  complexity->add_option("--m", cx.m_range, "M grid LO:STEP:HI")->capture_default_str();
  complexity->add_option("--k", cx.k, "iterations")->capture_default_str();
  complexity->add_option("--n", cx.n, "receive antennas of the measured problems")->capture_default_str();
  complexity->add_option("--seed", cx.seed, "problem seed")->capture_default_str();
  complexity->add_option("--baseline", cx.baseline, "solve | inversion")->capture_default_str();
  complexity->add_option("--out", cx.out_path, "CSV path (default stdout)");

  SelftestArgs st;
  auto* selftest = app.add_subcommand("selftest", "Fast invariant suite");
  selftest->add_option("--seed", st.seed, "instance seed")->capture_default_str();
  selftest->add_option("--inject-fault", st.fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*complexity) return cmd_complexity(cx, out, err);
    if (*selftest) return cmd_selftest(st, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace rbd::cli
