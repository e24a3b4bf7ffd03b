#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rbd/sim.hpp"
#include "rbd_cli/cli.hpp"
#include "rbd_cli/selftest.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rbd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = rbd::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const char* name) { return (fs::path(RBD_CONFIG_DIR) / name).string(); }

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream is(csv);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

}  // namespace

TEST_CASE("simulate") {
  // Same file, reduced budget via overrides.
  const std::string quick = "snr_db_list=10;20,max_bits=4800,target_bit_errors=100";

  SUBCASE("one row per (detector, k, snr) and the documented header") {
    const auto out = fs::temp_directory_path() / "rbd_cli_sim.csv";
    const Run r = run_cli({"simulate", "--config", config("iid_128x8.json"), "--override", quick, "--out", out.string()});
    REQUIRE(r.code == 0);
    std::ifstream is(out);
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string csv = ss.str();
    CHECK(csv.find(std::string(rbd::kResultsHeader) + "\n") != std::string::npos);
    // cholesky once, cr/gmres/minres for k in {3, 4}: 7 curves x 2 SNRs.
    CHECK(data_rows(csv).size() == 14);
    std::istringstream back(csv);
    CHECK(rbd::read_results(back).size() == 7);
    CHECK(r.out.find("# point cr k=4 snr_db=20") != std::string::npos);
    fs::remove(out);
  }
  SUBCASE("override narrows to a CR-only sweep") {
    const Run r = run_cli({"simulate", "--config", config("iid_128x8.json"), "--override", quick, "--override",
                           "detector=cr,k_iterations=3"});
    REQUIRE(r.code == 0);
    const auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) CHECK(row.rfind("cr,3,128,8,64,uncorrelated,", 0) == 0);
  }
  SUBCASE("resolved configuration echo") {
    const Run r = run_cli({"simulate", "--config", config("smoke.json")});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# resolved configuration\n", 0) == 0);
    CHECK(r.out.find(std::string(rbd::kSnrConvention)) != std::string::npos);
    CHECK(r.out.find("\"min_frames\": 10") != std::string::npos);
    CHECK(r.out.find("\"target_bit_errors\": 100") != std::string::npos);
    // The echoed configuration alone reproduces the run.
    std::string echoed;
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line) && line.rfind("# point", 0) != 0 && line.rfind("# ", 0) == 0)
      echoed += line.substr(2) + "\n";
    const auto path = fs::temp_directory_path() / "rbd_cli_echo.json";
    std::ofstream(path) << echoed;
    const Run again = run_cli({"simulate", "--config", path.string()});
    CHECK(again.code == 0);
    CHECK(again.out == r.out);
    fs::remove(path);
  }
  SUBCASE("plot data") {
    const auto plot = fs::temp_directory_path() / "rbd_cli_plot.txt";
    const Run r = run_cli({"simulate", "--config", config("smoke.json"), "--plot-data", plot.string()});
    REQUIRE(r.code == 0);
    std::ifstream is(plot);
    std::stringstream ss;
    ss << is.rdbuf();
    CHECK(ss.str().find("snr_db,ber") != std::string::npos);
    fs::remove(plot);
  }
  SUBCASE("seed and k flags") {
    const Run a = run_cli({"simulate", "--config", config("smoke.json"), "--seed", "5", "--k", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("\"master_seed\": 5") != std::string::npos);
    CHECK(data_rows(a.out).front().rfind("cr,3,", 0) == 0);
  }
  SUBCASE("missing config file") {
    const Run r = run_cli({"simulate", "--config", "/nonexistent/dir/missing.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("/nonexistent/dir/missing.json") != std::string::npos);
  }
  SUBCASE("config errors exit 2") {
    CHECK(run_cli({"simulate", "--config", config("smoke.json"), "--override", "bogus=1"}).code == 2);
    CHECK(run_cli({"simulate", "--config", config("smoke.json"), "--override", "snr_db_list=5;1"}).code == 2);
    CHECK(run_cli({"simulate", "--config", config("smoke.json"), "--override", "detector=zf"}).code == 2);
    CHECK(run_cli({"simulate", "--bogus-flag"}).code == 2);
    CHECK(run_cli({}).code == 2);
  }
  SUBCASE("runtime failures exit 1") {
    const Run r = run_cli({"simulate", "--config", config("smoke.json"), "--override", "snr_db_list=-4000;10"});
    CHECK(r.code == 1);
    CHECK(r.err.find("-4000") != std::string::npos);
  }
}

TEST_CASE("complexity") {
  SUBCASE("default grid has 16 rows per algorithm") {
    const Run r = run_cli({"complexity", "--m", "4:4:64", "--k", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# complexity: M=4:4:64 k=3", 0) == 0);
    const auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 48);
    int per[3] = {0, 0, 0};
    for (const auto& row : rows) {
      if (row.rfind("minres,", 0) == 0) ++per[0];
      if (row.rfind("gmres,", 0) == 0) ++per[1];
      if (row.rfind("cr,", 0) == 0) ++per[2];
    }
    CHECK(per[0] == 16);
    CHECK(per[1] == 16);
    CHECK(per[2] == 16);
  }
  SUBCASE("CR reduction at M = 60, k = 3") {
    const Run r = run_cli({"complexity", "--m", "60:1:60", "--k", "3"});
    REQUIRE(r.code == 0);
    bool seen = false;
    for (const auto& row : data_rows(r.out)) {
      if (row.rfind("cr,60,3,", 0) != 0) continue;
      seen = true;
      const double reduction = std::stod(row.substr(row.rfind(',') + 1));
      CHECK(reduction >= 0.80);
    }
    CHECK(seen);
  }
  SUBCASE("invalid input exits 2") {
    CHECK(run_cli({"complexity", "--k", "0"}).code == 2);
    CHECK(run_cli({"complexity", "--m", "8:0:16"}).code == 2);
    CHECK(run_cli({"complexity", "--m", "1.5:1:3"}).code == 2);
    CHECK(run_cli({"complexity", "--baseline", "lu"}).code == 2);
    CHECK(run_cli({"complexity", "--k", "x"}).code == 2);
  }
  SUBCASE("help exits 0") { CHECK(run_cli({"complexity", "--help"}).code == 0); }
}

TEST_CASE("selftest") {
  SUBCASE("clean build passes and is deterministic") {
    const Run a = run_cli({"selftest", "--seed", "3"});
    CHECK(a.code == 0);
    CHECK(a.out.find("FAIL") == std::string::npos);
    CHECK(a.out.find("PASS minres residual monotonicity") != std::string::npos);
    CHECK(run_cli({"selftest", "--seed", "3"}).out == a.out);
  }
  SUBCASE("injected alpha sign error is named") {
    const Run r = run_cli({"selftest", "--inject-fault", "minres-alpha-sign"});
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL minres residual monotonicity") != std::string::npos);
  }
  SUBCASE("unknown fault") { CHECK(run_cli({"selftest", "--inject-fault", "x"}).code == 2); }
}
