#include <cmath>

#include "rbd/detect.hpp"
#include "rbd/errors.hpp"

namespace rbd {

// For Hermitian A the symmetric part is A itself, so mu(A) = lambda_min(A) and
// mu(A^-1) = 1 / lambda_max(A).
ConvergenceBound residual_bound_minres(const ComplexMatrix& a) {
  const auto ext = hermitian_eigen_extrema(a);
  if (!(ext.min > 0.0)) throw DomainError("residual bound: matrix is not positive definite");
  ConvergenceBound b;
  b.lambda_min = ext.min;
  b.lambda_max = ext.max;
  b.mu_a = ext.min;
  b.mu_ainv = 1.0 / ext.max;
  b.tau2 = ext.max / ext.min;
  return b;
}

double residual_bound_gmres(const ConvergenceBound& bound, int k) {
  if (k < 0) throw DomainError("residual_bound_gmres: k must be >= 0");
  const double t2 = bound.tau2 * bound.tau2;
  const double base = std::max(0.0, (t2 - 1.0) / t2);
  return std::pow(base, 0.5 * k);
}

double residual_bound_gmres(const ComplexMatrix& a, int k) {
  return residual_bound_gmres(residual_bound_minres(a), k);
}

}  // namespace rbd
