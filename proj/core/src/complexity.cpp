#include "rbd/complexity.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "rbd/errors.hpp"

namespace rbd {

Cost analytic_cost(Detector algorithm, std::uint64_t m, std::uint64_t k) {
  if (m < 1 || k < 1) throw DomainError("analytic_cost: M and k must be >= 1");
  const std::uint64_t m2 = m * m;
  switch (algorithm) {
    case Detector::Minres:
      return {2 * k * m, 4 * k * m2 + 2 * k * m};
    case Detector::Gmres:
      // (k^2/2 + 3k/2 + 1) = (k+1)(k+2)/2 and (5k^2/2 + k/2 + 1) = (k(5k+1) + 2)/2;
      // both numerators are even for every integer k.
      return {(k + 1) * (k + 2) / 2 * m,
              (k * (5 * k + 1) + 2) / 2 * m2 + k * (k + 1) / 2 * m};
    case Detector::Cr:
      return {(4 * k + 1) * m, (k + 3) * m2 + 8 * k * m};
    case Detector::Cholesky:
      break;
  }
  throw DomainError("analytic_cost: no closed form for '" + std::string(to_string(algorithm)) + "'");
}

std::string_view to_string(BaselineConvention c) noexcept {
  switch (c) {
    case BaselineConvention::CholeskySolve: return "solve";
    case BaselineConvention::CholeskyInversion: return "inversion";
  }
  return "unknown";
}

BaselineConvention parse_baseline(std::string_view name) {
  if (name == "solve") return BaselineConvention::CholeskySolve;
  if (name == "inversion") return BaselineConvention::CholeskyInversion;
  throw DomainError("unknown baseline convention '" + std::string(name) +
                    "' (expected solve | inversion)");
}

Cost cholesky_cost(std::uint64_t m, BaselineConvention convention) {
  if (m < 1) throw DomainError("cholesky_cost: M must be >= 1");
  // Factorization: (M^3 - M)/6 inner-product mults + M(M-1)/2 divisions.
  const std::uint64_t cube = (m * m * m - m) / 6;
  Cost factor{cube, cube + m * (m - 1) / 2};
  if (convention == BaselineConvention::CholeskySolve) {
    return factor + Cost{m * (m - 1), m * m};
  }
  const Cost forward{cube, m * (m + 1) * (m + 2) / 6};
  const Cost backward{m * m * (m - 1) / 2, m * m * (m + 1) / 2};
  const Cost apply{m * (m - 1), m * m};
  return factor + forward + backward + apply;
}

OpCounter count_operations(Detector algorithm, const MmseProblem& prob, int k) {
  if (algorithm == Detector::Cholesky)
    throw DomainError("count_operations: the Cholesky baseline is counted analytically");
  OpCounter counter;
  DetectOptions opts;
  opts.counter = &counter;
  detect(algorithm, prob, k, opts);
  return counter;
}

Cost measured_cost(Detector algorithm, const MmseProblem& prob, int k) {
  const OpCounter c = count_operations(algorithm, prob, k);
  return {c.adds, c.mults};
}

CostReport make_cost_report(Detector algorithm, const MmseProblem& prob, int k,
                            BaselineConvention convention) {
  CostReport r;
  r.algorithm = algorithm;
  r.m = prob.m;
  r.k = static_cast<std::uint64_t>(k);
  r.analytic = analytic_cost(algorithm, r.m, r.k);
  r.measured = measured_cost(algorithm, prob, k);
  r.baseline = cholesky_cost(r.m, convention);
  r.convention = convention;
  r.reduction = r.baseline.mults > 0
                    ? 1.0 - static_cast<double>(r.measured.mults) / static_cast<double>(r.baseline.mults)
                    : 0.0;
  return r;
}

void write_complexity_csv(std::ostream& os, std::span<const CostReport> reports) {
  os << "algorithm,M,k,analytic_adds,analytic_mults,measured_adds,measured_mults,baseline_mults,"
        "reduction\n";
  const auto prec = os.precision();
  os << std::setprecision(6);
  for (const auto& r : reports) {
    os << to_string(r.algorithm) << ',' << r.m << ',' << r.k << ',' << r.analytic.adds << ','
       << r.analytic.mults << ',' << r.measured.adds << ',' << r.measured.mults << ','
       << r.baseline.mults << ',' << r.reduction << '\n';
  }
  os.precision(prec);
}

std::vector<double> fit_quadratic(std::span<const double> m, std::span<const double> count) {
  if (m.size() != count.size() || m.size() < 3)
    throw DimensionError("fit_quadratic: need >= 3 paired samples");
  // Normal equations of the Vandermonde system, solved by Gaussian elimination.
  std::array<std::array<double, 4>, 3> a{};
  for (std::size_t s = 0; s < m.size(); ++s) {
    const std::array<double, 3> row{m[s] * m[s], m[s], 1.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a[i][j] += row[i] * row[j];
      a[i][3] += row[i] * count[s];
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    if (a[c][c] == 0.0) throw SingularityError("fit_quadratic: degenerate sample set");
    for (int r = c + 1; r < 3; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int j = c; j < 4; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> x(3);
  for (int i = 2; i >= 0; --i) {
    double acc = a[i][3];
    for (int j = i + 1; j < 3; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace rbd
