#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rbd::cli {

enum class Fault { None, MinresAlphaSign };

struct SelftestOptions {
  std::uint64_t seed = 1;
  int instances = 200;
  Fault fault = Fault::None;
};

struct InvariantResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Fast invariant suite on small random MMSE problems (M <= 8).
std::vector<InvariantResult> run_selftest(const SelftestOptions& opts);

/// One "PASS name" / "FAIL name: detail" line per invariant; returns true if all passed.
bool report_selftest(const std::vector<InvariantResult>& results, std::ostream& out);

}  // namespace rbd::cli
