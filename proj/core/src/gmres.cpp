#include <algorithm>
#include <cmath>
#include <string>

#include "rbd/detect.hpp"
#include "rbd/errors.hpp"

namespace rbd {

ArnoldiState::ArnoldiState(const ComplexVector& r0, std::size_t max_dim, OpCounter* counter)
    : q_(r0.size(), max_dim + 1), h_(max_dim + 1, max_dim), beta_(norm2(r0, counter)) {
  if (max_dim == 0) throw DomainError("ArnoldiState: max_dim must be >= 1");
  if (beta_ == 0.0) throw SingularityError("ArnoldiState: r0 is zero");
  const double inv = 1.0 / beta_;
  count_mults(counter, 1 + r0.size());  // reciprocal, scaling
  auto q1 = q_.col(0);
  for (std::size_t i = 0; i < r0.size(); ++i) q1[i] = r0[i] * inv;
}

ArnoldiOutcome arnoldi_step(const ComplexMatrix& a, ArnoldiState& state, std::size_t j,
                            OpCounter* counter) {
  if (j != state.steps_ || j >= state.max_dim()) {
    throw DomainError("arnoldi_step: column " + std::to_string(j) + " is not the next step");
  }
  const std::size_t m = a.rows();
  ComplexVector qj(std::vector<Complex>(state.q_.col(j).begin(), state.q_.col(j).end()));
  ComplexVector w = matvec(a, qj, counter);
  const double aq_norm = norm2(w);

  // Modified Gram-Schmidt: each projection uses the already-updated w.
  for (std::size_t i = 0; i <= j; ++i) {
    const Complex hij = inner_hermitian(state.q_.col(i), w.span(), counter);
    state.h_(i, j) = hij;
    kernel_mac_inplace(w.span(), -hij, state.q_.col(i), counter);
  }
  const double hnext = norm2(w, counter);
  state.h_(j + 1, j) = hnext;
  state.steps_ = j + 1;

  if (hnext <= kBreakdownTol * aq_norm) return ArnoldiOutcome::HappyBreakdown;

  const double inv = 1.0 / hnext;
  count_mults(counter, 1 + m);
  auto qn = state.q_.col(j + 1);
  for (std::size_t i = 0; i < m; ++i) qn[i] = w[i] * inv;
  return ArnoldiOutcome::Extended;
}

GivensChain make_givens_chain(double beta, std::size_t max_dim) {
  GivensChain chain;
  chain.rotations.reserve(max_dim);
  chain.g = ComplexVector(max_dim + 1);
  chain.g[0] = beta;
  return chain;
}

ComplexVector givens_lsq_update(GivensChain& chain, std::span<const Complex> hessenberg_col,
                                std::size_t j, OpCounter* counter) {
  if (chain.rotations.size() != j) {
    throw DomainError("givens_lsq_update: chain holds " + std::to_string(chain.rotations.size()) +
                      " rotations, expected " + std::to_string(j));
  }
  if (hessenberg_col.size() < j + 2 || chain.g.size() < j + 2) {
    throw DimensionError("givens_lsq_update: column needs j + 2 entries");
  }
  std::vector<Complex> col(hessenberg_col.begin(), hessenberg_col.begin() + j + 2);

  for (const auto& rot : chain.rotations) {
    const Complex x = col[rot.index];
    const Complex y = col[rot.index + 1];
    col[rot.index] = rot.c * x + rot.b * y;
    col[rot.index + 1] = -std::conj(rot.b) * x + rot.c * y;
    count_mults(counter, 4);
    count_adds(counter, 2);
  }

  const Complex rho = col[j];
  const Complex sigma = col[j + 1];
  const double rho_abs = std::abs(rho);
  const double r = std::hypot(rho_abs, std::abs(sigma));
  count_mults(counter, 3);  // |rho|^2, |sigma|^2, sqrt
  count_adds(counter, 1);

  GivensRotation rot;
  rot.index = j;
  if (r == 0.0 || std::abs(sigma) == 0.0) {
    rot.c = 1.0;
    rot.b = 0.0;
  } else if (rho_abs == 0.0) {
    rot.c = 0.0;
    rot.b = std::conj(sigma) / std::abs(sigma);
    count_mults(counter, 1);
  } else {
    // c = |rho| / r, b = (rho / |rho|) conj(sigma) / r; reduces to rho/r, sigma/r when real.
    rot.c = rho_abs / r;
    rot.b = (rho / rho_abs) * std::conj(sigma) / r;
    count_mults(counter, 4);
  }
  col[j] = rot.c * rho + rot.b * sigma;
  col[j + 1] = 0.0;
  count_mults(counter, 2);
  count_adds(counter, 1);

  const Complex gj = chain.g[j];
  chain.g[j] = rot.c * gj;
  chain.g[j + 1] = -std::conj(rot.b) * gj;
  count_mults(counter, 2);
  chain.rotations.push_back(rot);

  return ComplexVector(std::vector<Complex>(col.begin(), col.begin() + j + 1));
}

ComplexVector hessenberg_back_substitute(const ComplexMatrix& r, std::span<const Complex> g,
                                         OpCounter* counter) {
  const std::size_t v = g.size();
  if (r.rows() < v || r.cols() < v) throw DimensionError("hessenberg_back_substitute: R too small");
  ComplexVector p(v);
  for (std::size_t ii = v; ii-- > 0;) {
    Complex acc = g[ii];
    for (std::size_t k = ii + 1; k < v; ++k) acc -= r(ii, k) * p[k];
    count_mults(counter, v - ii - 1);
    count_adds(counter, v - ii - 1);
    if (std::abs(r(ii, ii)) < 1e-300) {
      throw SingularityError("hessenberg_back_substitute: R(" + std::to_string(ii) + "," +
                             std::to_string(ii) + ") is zero");
    }
    p[ii] = acc / r(ii, ii);
    count_mults(counter, 1);
  }
  return p;
}

DetectionResult gmres_detect(const MmseProblem& prob, int krylov_dim, const DetectOptions& opts) {
  if (krylov_dim < 1) throw DomainError("gmres_detect: V must be >= 1");
  OpCounter* ctr = opts.counter;
  const std::size_t m = prob.m;
  const auto vmax = static_cast<std::size_t>(krylov_dim);

  DetectionResult res;
  ComplexVector s(m);
  const ComplexVector r0 = subtract(prob.y_mf, matvec(prob.a, s, ctr), ctr);
  const double r0_norm = norm2(r0);
  res.trace.residual_norms.push_back(r0_norm);
  res.trace.iterate_norms.push_back(0.0);
  if (r0_norm == 0.0) {
    res.s_hat = std::move(s);
    return res;
  }

  ArnoldiState arnoldi(r0, vmax, ctr);
  GivensChain chain = make_givens_chain(arnoldi.beta(), vmax);
  ComplexMatrix rmat(vmax, vmax);
  const double stop = kConvergedResidual * arnoldi.beta();

  std::size_t v = 0;
  while (v < vmax) {
    const ArnoldiOutcome outcome = arnoldi_step(prob.a, arnoldi, v, ctr);
    const auto hcol = arnoldi.hessenberg().col(v);
    const ComplexVector rcol = givens_lsq_update(chain, hcol.first(v + 2), v, ctr);
    std::copy(rcol.begin(), rcol.end(), rmat.col(v).begin());
    ++v;
    const double gamma = std::abs(chain.g[v]);
    res.trace.residual_norms.push_back(gamma);
    if (outcome == ArnoldiOutcome::HappyBreakdown || gamma <= stop) break;
  }

  // One least-squares solve after the loop, then s_V = s_0 + Q_V p_V.
  const ComplexVector p = hessenberg_back_substitute(rmat, chain.g.span().first(v), ctr);
  for (std::size_t i = 0; i < v; ++i) kernel_mac_inplace(s.span(), p[i], arnoldi.basis().col(i), ctr);

  // ||s_j|| = ||p_j|| because Q has orthonormal columns and s_0 = 0; the
  // leading j x j block of R and first j entries of g are final after step j.
  for (std::size_t jj = 1; jj < v; ++jj)
    res.trace.iterate_norms.push_back(norm2(hessenberg_back_substitute(rmat, chain.g.span().first(jj))));
  res.trace.iterate_norms.push_back(norm2(p));

  res.iterations = static_cast<int>(v);
  res.s_hat = std::move(s);
  return res;
}

}  // namespace rbd
