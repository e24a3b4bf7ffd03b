#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "rbd/op_counter.hpp"

namespace rbd {

using Complex = std::complex<double>;

/// Absolute per-entry tolerance for Hermitian checks.
inline constexpr double kHermitianTol = 1e-12;
/// Cholesky pivots at or below this value are rejected.
inline constexpr double kPivotThreshold = 1e-14;

class ComplexVector {
public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n, Complex fill = {}) : data_(n, fill) {}
  ComplexVector(std::initializer_list<Complex> values) : data_(values) {}
  explicit ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator[](std::size_t i) noexcept { return data_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return data_[i]; }

  Complex* data() noexcept { return data_.data(); }
  const Complex* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<Complex> span() noexcept { return data_; }
  std::span<const Complex> span() const noexcept { return data_; }

  bool operator==(const ComplexVector&) const = default;

private:
  std::vector<Complex> data_;
};

/// Dense complex matrix, column-major: entry (i, j) lives at data[i + j * rows].
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Row-wise literal, convenient for small fixtures: {{a, b}, {c, d}}.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i + j * rows_];
  }

  std::span<Complex> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const Complex> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  Complex* data() noexcept { return data_.data(); }
  const Complex* data() const noexcept { return data_.data(); }
  std::size_t size() const noexcept { return data_.size(); }

  bool operator==(const ComplexMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// ---------------------------------------------------------------------------
// Vector / matrix primitives. The optional counter receives the exact number
// of complex operations performed (see OpCounter).

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x, OpCounter* counter = nullptr);

/// Returns x^H y.
Complex inner_hermitian(std::span<const Complex> x, std::span<const Complex> y,
                        OpCounter* counter = nullptr);
inline Complex inner_hermitian(const ComplexVector& x, const ComplexVector& y,
                               OpCounter* counter = nullptr) {
  return inner_hermitian(x.span(), y.span(), counter);
}

double squared_norm(std::span<const Complex> x, OpCounter* counter = nullptr);
double norm2(std::span<const Complex> x, OpCounter* counter = nullptr);
inline double norm2(const ComplexVector& x, OpCounter* counter = nullptr) {
  return norm2(x.span(), counter);
}

ComplexVector subtract(const ComplexVector& a, const ComplexVector& b, OpCounter* counter = nullptr);

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);

/// max_{i,j} |A(i,j) - conj(A(j,i))|; infinity for non-square input.
double hermitian_deviation(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);

// ---------------------------------------------------------------------------
// Cholesky

/// Lower-triangular L with real positive diagonal such that L L^H = A.
class CholeskyFactor {
public:
  explicit CholeskyFactor(ComplexMatrix lower) : lower_(std::move(lower)) {}

  const ComplexMatrix& lower() const noexcept { return lower_; }
  std::size_t dim() const noexcept { return lower_.rows(); }

private:
  ComplexMatrix lower_;
};

/// Throws NotHermitianError, DimensionError, or DefinitenessError (with the
/// 0-based failing pivot index).
CholeskyFactor cholesky_factor(const ComplexMatrix& a);

/// Forward substitution with L, then backward with L^H.
ComplexVector cholesky_solve(const CholeskyFactor& f, const ComplexVector& y);

// ---------------------------------------------------------------------------
// Hermitian eigen-decomposition (cyclic Jacobi; intended for dim <= a few hundred)

struct HermitianEigen {
  std::vector<double> values;  ///< ascending
  ComplexMatrix vectors;       ///< column k pairs with values[k]
};

HermitianEigen hermitian_eigen(const ComplexMatrix& a);

struct EigenExtrema {
  double min = 0.0;
  double max = 0.0;
};

EigenExtrema hermitian_eigen_extrema(const ComplexMatrix& a);

// ---------------------------------------------------------------------------
// Text fixture format: "rows cols" header, then one "re im" pair per entry in
// column-major order, 17 significant digits.

void write_matrix(std::ostream& os, const ComplexMatrix& a);
ComplexMatrix read_matrix(std::istream& is);
void write_vector(std::ostream& os, const ComplexVector& x);
ComplexVector read_vector(std::istream& is);

}  // namespace rbd
