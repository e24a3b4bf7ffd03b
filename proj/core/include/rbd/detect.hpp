#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rbd/linalg.hpp"
#include "rbd/op_counter.hpp"

namespace rbd {

/// Relative residual at which every iterative detector stops early.
inline constexpr double kConvergedResidual = 1e-13;
/// Arnoldi declares a happy breakdown when H(j+1,j) <= this * ||A q_j||.
inline constexpr double kBreakdownTol = 1e-13;

/// The regularized system A s = y_mf with A = H^H H + sigma2 I, y_mf = H^H y.
struct MmseProblem {
  ComplexMatrix a;
  ComplexVector y_mf;
  double sigma2 = 0.0;
  std::size_t n = 0;  ///< receive antennas (0 when built from a bare system)
  std::size_t m = 0;  ///< users

  /// Wraps an existing Hermitian system; used for toy problems and tests.
  static MmseProblem from_system(ComplexMatrix a, ComplexVector y_mf, double sigma2 = 0.0);
};

/// Gram matrix on the lower triangle (mirrored), regularization and matched filter.
MmseProblem preprocess(const ComplexMatrix& h, const ComplexVector& y, double sigma2);

struct DetectionTrace {
  std::vector<double> residual_norms;  ///< ||y_mf - A s_k||, k = 0..iterations
  std::vector<double> iterate_norms;   ///< ||s_k||, k = 0..iterations
};

struct DetectionResult {
  ComplexVector s_hat;
  int iterations = 0;
  DetectionTrace trace;
};

enum class Detector { Cholesky, Minres, Gmres, Cr };

std::string_view to_string(Detector d) noexcept;
/// "cholesky" | "minres" | "gmres" | "cr"; throws DomainError otherwise.
Detector parse_detector(std::string_view name);

struct DetectOptions {
  /// Receives the arithmetic of the algorithm proper. Trace bookkeeping and
  /// the early-termination test are not counted.
  OpCounter* counter = nullptr;
  /// Fault-injection hook for the self-test: flips the sign of the MINRES step.
  bool negate_minres_alpha = false;
};

// ---------------------------------------------------------------------------
// The two shared kernels every iteration is built from.

/// x + a b
ComplexVector kernel_mac(const ComplexVector& x, Complex a, const ComplexVector& b,
                         OpCounter* counter = nullptr);
/// In-place x += a b.
void kernel_mac_inplace(std::span<Complex> x, Complex a, std::span<const Complex> b,
                        OpCounter* counter = nullptr);
/// (m^H n) / (p^H q); SingularityError when |p^H q| < 1e-300.
Complex kernel_coeff(std::span<const Complex> m, std::span<const Complex> n,
                     std::span<const Complex> p, std::span<const Complex> q,
                     OpCounter* counter = nullptr);
inline Complex kernel_coeff(const ComplexVector& m, const ComplexVector& n, const ComplexVector& p,
                            const ComplexVector& q, OpCounter* counter = nullptr) {
  return kernel_coeff(m.span(), n.span(), p.span(), q.span(), counter);
}

// ---------------------------------------------------------------------------
// Detectors. All start from s_0 = 0.

DetectionResult minres_detect(const MmseProblem& prob, int iterations,
                              const DetectOptions& opts = {});
/// `krylov_dim` is V, the Krylov subspace dimension.
DetectionResult gmres_detect(const MmseProblem& prob, int krylov_dim,
                             const DetectOptions& opts = {});
DetectionResult cr_detect(const MmseProblem& prob, int iterations, const DetectOptions& opts = {});
DetectionResult exact_detect(const MmseProblem& prob);

/// Dispatch by name; `k` is ignored by Cholesky and is V for GMRES.
DetectionResult detect(Detector d, const MmseProblem& prob, int k, const DetectOptions& opts = {});

// ---------------------------------------------------------------------------
// Arnoldi / Givens building blocks of GMRES.

enum class ArnoldiOutcome { Extended, HappyBreakdown };

class ArnoldiState {
public:
  /// q_1 = r0 / ||r0||; storage for up to `max_dim` steps.
  ArnoldiState(const ComplexVector& r0, std::size_t max_dim, OpCounter* counter = nullptr);

  const ComplexMatrix& basis() const noexcept { return q_; }        ///< M x (V+1)
  const ComplexMatrix& hessenberg() const noexcept { return h_; }   ///< (V+1) x V
  double beta() const noexcept { return beta_; }
  std::size_t steps() const noexcept { return steps_; }             ///< columns filled
  std::size_t max_dim() const noexcept { return h_.cols(); }

private:
  friend ArnoldiOutcome arnoldi_step(const ComplexMatrix&, ArnoldiState&, std::size_t,
                                     OpCounter*);
  ComplexMatrix q_;
  ComplexMatrix h_;
  double beta_;
  std::size_t steps_ = 0;
};

/// Fills Hessenberg column j (0-based) by modified Gram-Schmidt on A q_j and,
/// unless the new subdiagonal falls below tolerance, appends q_{j+1}.
ArnoldiOutcome arnoldi_step(const ComplexMatrix& a, ArnoldiState& state, std::size_t j,
                            OpCounter* counter = nullptr);

/// Plane rotation [c b; -conj(b) c] with real c. For the real (rho, sigma)
/// pairs produced by Hermitian systems b is real as well.
struct GivensRotation {
  double c = 1.0;
  Complex b{};
  std::size_t index = 0;  ///< acts on rows index, index+1
};

struct GivensChain {
  std::vector<GivensRotation> rotations;
  ComplexVector g;  ///< rotated beta e_1; |g[j]| after j rotations is the residual norm
};

/// Starts a chain for right-hand side beta e_1 with room for `max_dim` rotations.
GivensChain make_givens_chain(double beta, std::size_t max_dim);

/// Applies the existing rotations to Hessenberg column j (length j+2), forms the
/// rotation that annihilates its subdiagonal and updates g. Returns the
/// triangular column (length j+1).
ComplexVector givens_lsq_update(GivensChain& chain, std::span<const Complex> hessenberg_col,
                                std::size_t j, OpCounter* counter = nullptr);

/// Solves R p = g for upper-triangular R (only the leading g.size() block is used).
ComplexVector hessenberg_back_substitute(const ComplexMatrix& r, std::span<const Complex> g,
                                         OpCounter* counter = nullptr);

// ---------------------------------------------------------------------------
// Convergence bounds (diagnostics; O(M^3) eigen-decomposition).

struct ConvergenceBound {
  double mu_a = 0.0;     ///< lambda_min(A) for Hermitian A
  double mu_ainv = 0.0;  ///< 1 / lambda_max(A)
  double tau2 = 1.0;     ///< lambda_max / lambda_min
  double lambda_min = 0.0;
  double lambda_max = 0.0;

  /// Per-step factor on ||r||^2 for MINRES: 1 - mu(A) mu(A^-1).
  double minres_factor() const noexcept { return 1.0 - mu_a * mu_ainv; }
};

ConvergenceBound residual_bound_minres(const ComplexMatrix& a);
/// ((tau^2 - 1) / tau^2)^(k/2); multiply by ||r_0|| for the GMRES residual bound.
double residual_bound_gmres(const ComplexMatrix& a, int k);
double residual_bound_gmres(const ConvergenceBound& bound, int k);

}  // namespace rbd
