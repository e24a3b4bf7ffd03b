#include "rbd_cli/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "rbd/complexity.hpp"
#include "rbd/detect.hpp"
#include "rbd/random.hpp"
#include "rbd/sim.hpp"

namespace rbd::cli {

namespace {

struct Instance {
  MmseProblem prob;
  std::uint64_t index;
};

double rel_error(const ComplexVector& x, const ComplexVector& ref) {
  return norm2(subtract(x, ref)) / std::max(norm2(ref), 1e-300);
}

class Check {
public:
  explicit Check(std::string name) { result_.name = std::move(name); }

  void expect(bool ok, const std::function<std::string()>& detail) {
    if (ok || !result_.passed) return;
    result_.passed = false;
    result_.detail = detail();
  }

  InvariantResult take() { return std::move(result_); }

private:
  InvariantResult result_;
};

std::string at(const Instance& in, std::size_t k, const std::string& what) {
  std::ostringstream os;
  os << "instance " << in.index << " (M=" << in.prob.m << ") iteration " << k << ": " << what;
  return os.str();
}

}  // namespace

std::vector<InvariantResult> run_selftest(const SelftestOptions& opts) {
  std::vector<Instance> instances;
  for (int t = 0; t < opts.instances; ++t) {
    CounterRng rng(derive_seed(opts.seed, 0x5e1f, static_cast<std::uint64_t>(t)));
    const std::size_t m = 2 + rng.next_u64() % 7;
    const std::size_t n = m * (2 + rng.next_u64() % 7);
    const double sigma2 = 0.01 + 0.99 * rng.uniform();
    instances.push_back({random_mmse_problem(n, m, sigma2, rng.next_u64()), static_cast<std::uint64_t>(t)});
  }

  DetectOptions minres_opts;
  minres_opts.negate_minres_alpha = opts.fault == Fault::MinresAlphaSign;
  constexpr double kSlack = 1e-12;

  Check chol("cholesky residual"), cr_eq("cr oracle equivalence"), gm_eq("gmres oracle equivalence");
  Check mono("minres residual monotonicity"), contraction("minres contraction bound");
  Check gm_bound("gmres residual bound"), cr_mono("cr residual monotonicity");
  Check cr_norm("cr iterate norm growth"), agree("gmres cr agreement");

  for (const auto& in : instances) {
    const auto& p = in.prob;
    const int m = static_cast<int>(p.m);
    const double y_norm = norm2(p.y_mf);

    const DetectionResult exact = exact_detect(p);
    const double res = norm2(subtract(p.y_mf, matvec(p.a, exact.s_hat)));
    chol.expect(res <= 1e-10 * y_norm, [&] { return at(in, 0, "residual " + std::to_string(res / y_norm)); });

    const DetectionResult cr = cr_detect(p, m);
    const DetectionResult gm = gmres_detect(p, m);
    const double e_cr = rel_error(cr.s_hat, exact.s_hat);
    const double e_gm = rel_error(gm.s_hat, exact.s_hat);
    cr_eq.expect(e_cr <= 1e-8, [&] { return at(in, m, "relative error " + std::to_string(e_cr)); });
    gm_eq.expect(e_gm <= 1e-8, [&] { return at(in, m, "relative error " + std::to_string(e_gm)); });

    const DetectionResult mr = minres_detect(p, m, minres_opts);
    const ConvergenceBound bound = residual_bound_minres(p.a);
    const auto& rm = mr.trace.residual_norms;
    for (std::size_t k = 1; k < rm.size(); ++k) {
      mono.expect(rm[k] <= rm[k - 1] * (1.0 + kSlack),
                  [&] { return at(in, k, "residual grew from " + std::to_string(rm[k - 1]) + " to " + std::to_string(rm[k])); });
      contraction.expect(rm[k] * rm[k] <= bound.minres_factor() * rm[k - 1] * rm[k - 1] * (1.0 + kSlack),
                         [&] { return at(in, k, "contraction violated"); });
    }

    const auto& rg = gm.trace.residual_norms;
    for (std::size_t k = 0; k < rg.size(); ++k) {
      const double b = residual_bound_gmres(bound, static_cast<int>(k)) * rg[0];
      gm_bound.expect(rg[k] <= b * (1.0 + kSlack) + kSlack * rg[0], [&] { return at(in, k, "above bound"); });
    }

    const auto& rc = cr.trace.residual_norms;
    const auto& sc = cr.trace.iterate_norms;
    for (std::size_t k = 1; k < rc.size(); ++k) {
      const bool converged = rc[k - 1] <= 1e-12 * y_norm;
      cr_mono.expect(converged || rc[k] < rc[k - 1], [&] { return at(in, k, "residual did not decrease"); });
      cr_norm.expect(sc[k] >= sc[k - 1] * (1.0 - kSlack), [&] { return at(in, k, "iterate norm decreased"); });
    }

    const std::size_t len = std::min(rc.size(), rg.size());
    for (std::size_t k = 0; k < len; ++k) {
      const bool floor = rc[k] <= 1e-12 * y_norm && rg[k] <= 1e-12 * y_norm;
      const double rel = std::abs(rc[k] - rg[k]) / std::max(rc[k], 1e-300);
      agree.expect(floor || rel <= 1e-6, [&] { return at(in, k, "relative gap " + std::to_string(rel)); });
    }
  }

  Check spot("analytic complexity spot values");
  const std::uint64_t got_m = analytic_cost(Detector::Minres, 8, 3).mults;
  const std::uint64_t got_g = analytic_cost(Detector::Gmres, 8, 3).mults;
  const std::uint64_t got_c = analytic_cost(Detector::Cr, 8, 3).mults;
  spot.expect(got_m == 816 && got_g == 1648 && got_c == 576, [&] {
    return "M=8 k=3 gave " + std::to_string(got_m) + "/" + std::to_string(got_g) + "/" + std::to_string(got_c);
  });

  std::vector<InvariantResult> out;
  for (Check* c : {&chol, &cr_eq, &gm_eq, &mono, &contraction, &gm_bound, &cr_mono, &cr_norm, &agree, &spot})
    out.push_back(c->take());
  return out;
}

bool report_selftest(const std::vector<InvariantResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    if (r.passed) {
      out << "PASS " << r.name << '\n';
    } else {
      out << "FAIL " << r.name << ": " << r.detail << '\n';
      all = false;
    }
  }
  return all;
}

}  // namespace rbd::cli
