#pragma once
// Independent reference implementations for tests. Nothing here calls into the
// library's arithmetic; randomness comes from std::mt19937_64.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "rbd/linalg.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;  // row-major
using Vec = std::vector<C>;

inline Mat to_rows(const rbd::ComplexMatrix& a) {
  Mat m(a.rows(), Vec(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  return m;
}

inline rbd::ComplexMatrix from_rows(const Mat& m) {
  rbd::ComplexMatrix a(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = m[i][j];
  return a;
}

inline Vec to_vec(const rbd::ComplexVector& x) { return Vec(x.begin(), x.end()); }
inline rbd::ComplexVector from_vec(const Vec& v) { return rbd::ComplexVector(v); }

// Real-arithmetic complex product, so the oracle does not share std::complex's
// multiplication path with the library.
inline C mul(C a, C b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline Vec matvec(const Mat& a, const Vec& x) {
  Vec y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += mul(a[i][j], x[j]);
  return y;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.size(), Vec(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += mul(a[i][k], b[k][j]);
  return c;
}

inline Mat adjoint(const Mat& a) {
  Mat t(a[0].size(), Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = std::conj(a[i][j]);
  return t;
}

inline C dot(const Vec& x, const Vec& y) {
  C s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += mul(std::conj(x[i]), y[i]);
  return s;
}

inline double norm(const Vec& x) {
  double s = 0.0;
  for (const C& v : x) s += v.real() * v.real() + v.imag() * v.imag();
  return std::sqrt(s);
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline double rel_diff(const Vec& a, const Vec& b) { return norm(sub(a, b)) / std::max(norm(b), 1e-300); }

inline double frob(const Mat& a) {
  double s = 0.0;
  for (const auto& r : a)
    for (const C& v : r) s += std::norm(v);
  return std::sqrt(s);
}

inline Mat sub(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

/// Gaussian elimination with partial pivoting.
inline Vec gauss_solve(Mat a, Vec b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    if (std::abs(a[c][c]) == 0.0) throw std::runtime_error("gauss_solve: singular");
    for (std::size_t r = c + 1; r < n; ++r) {
      const C f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    C acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

/// Cramer's rule for a 2x2 system.
inline Vec cramer2(const Mat& a, const Vec& b) {
  const C det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {(b[0] * a[1][1] - a[0][1] * b[1]) / det, (a[0][0] * b[1] - b[0] * a[1][0]) / det};
}

/// Eigenvalues of the Hermitian [[a, b], [conj(b), c]] from the characteristic polynomial.
inline std::pair<double, double> eig2(double a, C b, double c) {
  const double tr = a + c;
  const double det = a * c - std::norm(b);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  C cn(double var = 1.0) {
    std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
    return {n(gen_), n(gen_)};
  }
  Vec vec(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = cn();
    return v;
  }
  Mat mat(std::size_t r, std::size_t c) {
    Mat m(r, Vec(c));
    for (auto& row : m)
      for (auto& x : row) x = cn();
    return m;
  }

private:
  std::mt19937_64 gen_;
};

/// H^H H + sigma2 I from an i.i.d. N x M draw.
inline Mat random_spd(Rng& rng, std::size_t n, std::size_t m, double sigma2) {
  const Mat h = rng.mat(n, m);
  Mat a = matmul(adjoint(h), h);
  for (std::size_t i = 0; i < m; ++i) a[i][i] = a[i][i].real() + sigma2;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) a[j][i] = std::conj(a[i][j]);
  return a;
}

/// Operation tally used by the instrumented reference Cholesky variants.
struct Tally {
  std::uint64_t mults = 0;
  std::uint64_t adds = 0;
};

/// Textbook Cholesky; a product, division or square root each count one mult.
inline Mat cholesky_counted(const Mat& a, Tally& t) {
  const std::size_t n = a.size();
  Mat l(n, Vec(n));
  for (std::size_t j = 0; j < n; ++j) {
    C d = a[j][j];
    for (std::size_t k = 0; k < j; ++k) {
      d -= l[j][k] * std::conj(l[j][k]);
      ++t.mults;
      ++t.adds;
    }
    l[j][j] = std::sqrt(d.real());
    ++t.mults;
    for (std::size_t i = j + 1; i < n; ++i) {
      C s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) {
        s -= l[i][k] * std::conj(l[j][k]);
        ++t.mults;
        ++t.adds;
      }
      l[i][j] = s / l[j][j];
      ++t.mults;
    }
  }
  return l;
}

/// Explicit A^-1 from L: forward substitution on the columns of I (only the
/// non-zero tail of each column), then backward substitution with L^H.
inline Mat inverse_from_cholesky_counted(const Mat& l, Tally& t) {
  const std::size_t n = l.size();
  Mat inv(n, Vec(n));
  for (std::size_t c = 0; c < n; ++c) {
    Vec z(n);
    for (std::size_t i = c; i < n; ++i) {
      C s = i == c ? C{1.0} : C{};
      for (std::size_t k = c; k < i; ++k) {
        s -= l[i][k] * z[k];
        ++t.mults;
        ++t.adds;
      }
      z[i] = s / l[i][i];
      ++t.mults;
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
      C s = z[i];
      for (std::size_t k = i + 1; k < n; ++k) {
        s -= std::conj(l[k][i]) * x[k];
        ++t.mults;
        ++t.adds;
      }
      x[i] = s / l[i][i];
      ++t.mults;
    }
    for (std::size_t i = 0; i < n; ++i) inv[i][c] = x[i];
  }
  return inv;
}

inline Vec matvec_counted(const Mat& a, const Vec& x, Tally& t) {
  Vec y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    t.mults += x.size();
    t.adds += x.size() - 1;
  }
  return y;
}

/// Forward then backward substitution with L and L^H.
inline Vec cholesky_solve_counted(const Mat& l, const Vec& y, Tally& t) {
  const std::size_t n = l.size();
  Vec z(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    C s = y[i];
    for (std::size_t k = 0; k < i; ++k) {
      s -= l[i][k] * z[k];
      ++t.mults;
      ++t.adds;
    }
    z[i] = s / l[i][i];
    ++t.mults;
  }
  for (std::size_t i = n; i-- > 0;) {
    C s = z[i];
    for (std::size_t k = i + 1; k < n; ++k) {
      s -= std::conj(l[k][i]) * x[k];
      ++t.mults;
      ++t.adds;
    }
    x[i] = s / l[i][i];
    ++t.mults;
  }
  return x;
}

}  // namespace oracle
