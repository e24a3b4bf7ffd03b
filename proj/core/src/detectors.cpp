#include <cmath>
#include <string>

#include "rbd/detect.hpp"
#include "rbd/errors.hpp"

namespace rbd {

namespace {

void require_iterations(int k, const char* who) {
  if (k < 1) throw DomainError(std::string(who) + ": iteration count must be >= 1");
}

double explicit_residual(const MmseProblem& prob, const ComplexVector& s) {
  return norm2(subtract(prob.y_mf, matvec(prob.a, s)));
}

}  // namespace

DetectionResult minres_detect(const MmseProblem& prob, int iterations, const DetectOptions& opts) {
  require_iterations(iterations, "minres_detect");
  OpCounter* ctr = opts.counter;
  const std::size_t m = prob.m;
  const double stop = kConvergedResidual * norm2(prob.y_mf);

  DetectionResult res;
  ComplexVector s(m);
  res.trace.iterate_norms.push_back(0.0);

  int k = 0;
  bool converged = false;
  for (; k < iterations; ++k) {
    // r_k = y - A s_k, recomputed explicitly every iteration.
    const ComplexVector r = subtract(prob.y_mf, matvec(prob.a, s, ctr), ctr);
    const double rnorm = norm2(r);
    res.trace.residual_norms.push_back(rnorm);
    if (rnorm <= stop) {
      converged = true;
      break;
    }
    const ComplexVector ar = matvec(prob.a, r, ctr);
    if (squared_norm(ar.span()) == 0.0) {
      converged = true;
      break;
    }
    Complex alpha = kernel_coeff(r, ar, ar, ar, ctr);
    if (opts.negate_minres_alpha) alpha = -alpha;
    kernel_mac_inplace(s.span(), alpha, r.span(), ctr);
    res.trace.iterate_norms.push_back(norm2(s));
  }
  if (!converged) res.trace.residual_norms.push_back(explicit_residual(prob, s));
  res.iterations = k;
  res.s_hat = std::move(s);
  return res;
}

DetectionResult cr_detect(const MmseProblem& prob, int iterations, const DetectOptions& opts) {
  require_iterations(iterations, "cr_detect");
  OpCounter* ctr = opts.counter;
  const std::size_t m = prob.m;
  const double stop = kConvergedResidual * norm2(prob.y_mf);

  ComplexVector s(m);
  ComplexVector r = subtract(prob.y_mf, matvec(prob.a, s, ctr), ctr);
  ComplexVector p = r;
  ComplexVector e = matvec(prob.a, p, ctr);
  ComplexVector mk = matvec(prob.a, r, ctr);

  DetectionResult res;
  res.trace.residual_norms.push_back(norm2(r));
  res.trace.iterate_norms.push_back(0.0);

  int done = 0;
  for (; done < iterations; ++done) {
    if (norm2(r) <= stop || std::abs(inner_hermitian(r.span(), mk.span())) < 1e-300) break;
    const Complex alpha = kernel_coeff(r, mk, e, e, ctr);
    kernel_mac_inplace(s.span(), alpha, p.span(), ctr);
    ComplexVector r_next = kernel_mac(r, -alpha, e, ctr);
    ComplexVector m_next = matvec(prob.a, r_next, ctr);
    const Complex beta = kernel_coeff(r_next, m_next, r, mk, ctr);
    p = kernel_mac(r_next, beta, p, ctr);
    e = kernel_mac(m_next, beta, e, ctr);
    r = std::move(r_next);
    mk = std::move(m_next);
    res.trace.residual_norms.push_back(explicit_residual(prob, s));
    res.trace.iterate_norms.push_back(norm2(s));
  }
  res.iterations = done;
  res.s_hat = std::move(s);
  return res;
}

DetectionResult exact_detect(const MmseProblem& prob) {
  DetectionResult res;
  res.s_hat = cholesky_solve(cholesky_factor(prob.a), prob.y_mf);
  res.iterations = 0;
  res.trace.residual_norms.push_back(explicit_residual(prob, res.s_hat));
  res.trace.iterate_norms.push_back(norm2(res.s_hat));
  return res;
}

DetectionResult detect(Detector d, const MmseProblem& prob, int k, const DetectOptions& opts) {
  switch (d) {
    case Detector::Cholesky: return exact_detect(prob);
    case Detector::Minres: return minres_detect(prob, k, opts);
    case Detector::Gmres: return gmres_detect(prob, k, opts);
    case Detector::Cr: return cr_detect(prob, k, opts);
  }
  throw DomainError("detect: unknown detector");
}

}  // namespace rbd
