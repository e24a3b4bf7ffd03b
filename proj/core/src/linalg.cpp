#include "rbd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rbd/errors.hpp"

namespace rbd {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

}  // namespace

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  ComplexMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("from_rows: ragged row literal");
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x, OpCounter* counter) {
  if (a.cols() != x.size()) {
    throw DimensionError("matvec: A has " + std::to_string(a.cols()) + " columns, x has length " +
                         std::to_string(x.size()));
  }
  ComplexVector out(a.rows());
  // Column sweep keeps the inner loop contiguous in column-major storage.
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const Complex xj = x[j];
    const Complex* col = a.col(j).data();
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] += col[i] * xj;
  }
  if (counter != nullptr) {
    counter->mul(a.rows() * a.cols());
    counter->add(a.rows() * (a.cols() - (a.cols() > 0 ? 1 : 0)));
    ++counter->matvecs;
  }
  return out;
}

Complex inner_hermitian(std::span<const Complex> x, std::span<const Complex> y,
                        OpCounter* counter) {
  require_same_length(x.size(), y.size(), "inner_hermitian");
  Complex acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  count_mults(counter, x.size());
  count_adds(counter, x.empty() ? 0 : x.size() - 1);
  return acc;
}

double squared_norm(std::span<const Complex> x, OpCounter* counter) {
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  count_mults(counter, x.size());
  count_adds(counter, x.empty() ? 0 : x.size() - 1);
  return acc;
}

double norm2(std::span<const Complex> x, OpCounter* counter) {
  const double s = squared_norm(x, counter);
  count_mults(counter, 1);  // square root
  return std::sqrt(s);
}

ComplexVector subtract(const ComplexVector& a, const ComplexVector& b, OpCounter* counter) {
  require_same_length(a.size(), b.size(), "subtract");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  count_adds(counter, a.size());
  return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex bkj = b(k, j);
      if (bkj == Complex{}) continue;
      for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) += a(i, k) * bkj;
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = std::conj(a(i, j));
  return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("subtract: shapes differ");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k] - b.data()[k];
  return out;
}

double frobenius_norm(const ComplexMatrix& a) {
  return std::sqrt(squared_norm(std::span<const Complex>(a.data(), a.size())));
}

double hermitian_deviation(const ComplexMatrix& a) {
  if (!a.is_square()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = j; i < a.rows(); ++i)
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
  return worst;
}

bool is_hermitian(const ComplexMatrix& a, double tol) { return hermitian_deviation(a) < tol; }

CholeskyFactor cholesky_factor(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("cholesky_factor: matrix is not square");
  if (!is_hermitian(a)) throw NotHermitianError("cholesky_factor: matrix is not Hermitian");

  const std::size_t n = a.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > kPivotThreshold)) throw DefinitenessError(j, d);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

ComplexVector cholesky_solve(const CholeskyFactor& f, const ComplexVector& y) {
  const auto& l = f.lower();
  const std::size_t n = f.dim();
  require_same_length(n, y.size(), "cholesky_solve");

  ComplexVector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z[k];
    z[i] = s / l(i, i);
  }
  ComplexVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& input) {
  if (!input.is_square()) throw NotHermitianError("hermitian_eigen: matrix is not square");
  if (!is_hermitian(input)) throw NotHermitianError("hermitian_eigen: matrix is not Hermitian");

  const std::size_t n = input.rows();
  ComplexMatrix a = input;
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double scale = std::max(1.0, frobenius_norm(input));
  const double tol = 1e-12 * scale;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() >= tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;

        // Phase-shift the (p,q) block to real symmetric, then a classical
        // real rotation. Combined 2x2 unitary:
        //   [ c            s          ]
        //   [ -s e^{-iφ}   c e^{-iφ}  ]
        const Complex phase = apq / mag;  // e^{iφ}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex v11 = c;
        const Complex v12 = s;
        const Complex v21 = -s * std::conj(phase);
        const Complex v22 = c * std::conj(phase);

        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = aip * v11 + aiq * v21;
          a(i, q) = aip * v12 + aiq * v22;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j);
          const Complex aqj = a(q, j);
          a(p, j) = std::conj(v11) * apj + std::conj(v21) * aqj;
          a(q, j) = std::conj(v12) * apj + std::conj(v22) * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vip = v(i, p);
          const Complex viq = v(i, q);
          v(i, p) = vip * v11 + viq * v21;
          v(i, q) = vip * v12 + viq * v22;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    auto src = v.col(order[k]);
    std::copy(src.begin(), src.end(), out.vectors.col(k).begin());
  }
  return out;
}

EigenExtrema hermitian_eigen_extrema(const ComplexMatrix& a) {
  const auto eig = hermitian_eigen(a);
  if (eig.values.empty()) throw DimensionError("hermitian_eigen_extrema: empty matrix");
  return {eig.values.front(), eig.values.back()};
}

}  // namespace rbd
