#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "rbd/detect.hpp"

namespace rbd {

/// Complex additions and multiplications (divisions and square roots count as
/// multiplications).
struct Cost {
  std::uint64_t adds = 0;
  std::uint64_t mults = 0;

  Cost& operator+=(const Cost& o) noexcept {
    adds += o.adds;
    mults += o.mults;
    return *this;
  }
  friend Cost operator+(Cost a, const Cost& b) noexcept { return a += b; }
  bool operator==(const Cost&) const = default;
};

/// Closed-form operation counts of the three residual-based detectors
/// (preprocessing excluded). Exact integer arithmetic; throws DomainError for
/// Cholesky, M < 1 or k < 1.
Cost analytic_cost(Detector algorithm, std::uint64_t m, std::uint64_t k);

/// How the exact baseline is counted. Both share the factorization count
/// M^3/6 + M^2/2 - 2M/3: inner-product products plus the M(M-1)/2 off-diagonal
/// divisions. The M diagonal square roots are not part of that formula.
enum class BaselineConvention {
  /// Factorization plus forward and backward substitution on y_mf, taken as
  /// M^2 in total (one set of M diagonal divisions is not counted).
  CholeskySolve,
  /// Factorization, then A^{-1} formed explicitly by forward substitution on I
  /// (exploiting its triangular fill, M(M+1)(M+2)/6) and full backward
  /// substitution (M^2(M+1)/2), divisions included, then A^{-1} y_mf (M^2).
  CholeskyInversion,
};

std::string_view to_string(BaselineConvention c) noexcept;
/// "solve" | "inversion"
BaselineConvention parse_baseline(std::string_view name);

Cost cholesky_cost(std::uint64_t m, BaselineConvention convention = BaselineConvention::CholeskySolve);

/// Runs the detector with an instrumented counter. Preprocessing is excluded.
OpCounter count_operations(Detector algorithm, const MmseProblem& prob, int k);
Cost measured_cost(Detector algorithm, const MmseProblem& prob, int k);

struct CostReport {
  Detector algorithm = Detector::Cr;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  Cost analytic;
  Cost measured;
  Cost baseline;
  BaselineConvention convention = BaselineConvention::CholeskyInversion;
  /// 1 - measured.mults / baseline.mults
  double reduction = 0.0;
};

CostReport make_cost_report(Detector algorithm, const MmseProblem& prob, int k,
                            BaselineConvention convention = BaselineConvention::CholeskyInversion);

/// Header: algorithm,M,k,analytic_adds,analytic_mults,measured_adds,measured_mults,baseline_mults,reduction
void write_complexity_csv(std::ostream& os, std::span<const CostReport> reports);

/// Least-squares fit count ~ a M^2 + b M + c; returns {a, b, c}.
std::vector<double> fit_quadratic(std::span<const double> m, std::span<const double> count);

}  // namespace rbd
