#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "rbd/errors.hpp"
#include "rbd/linalg.hpp"

namespace rbd {

namespace {

void write_entries(std::ostream& os, std::size_t rows, std::size_t cols, const Complex* data) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << rows << ' ' << cols << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < rows * cols; ++k) os << data[k].real() << ' ' << data[k].imag() << '\n';
  os.flags(flags);
  os.precision(prec);
}

template <typename Store>
void read_entries(std::istream& is, std::size_t count, Store store) {
  for (std::size_t k = 0; k < count; ++k) {
    double re = 0.0;
    double im = 0.0;
    if (!(is >> re >> im)) {
      throw ParseError(k + 2, "entry " + std::to_string(k), "expected 're im' pair");
    }
    store(k, Complex(re, im));
  }
}

std::pair<std::size_t, std::size_t> read_header(std::istream& is) {
  long long rows = 0;
  long long cols = 0;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) {
    throw ParseError(1, "rows cols", "expected two non-negative integers");
  }
  return {static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
}

}  // namespace

void write_matrix(std::ostream& os, const ComplexMatrix& a) {
  write_entries(os, a.rows(), a.cols(), a.data());
}

ComplexMatrix read_matrix(std::istream& is) {
  const auto [rows, cols] = read_header(is);
  ComplexMatrix m(rows, cols);
  read_entries(is, rows * cols, [&](std::size_t k, Complex v) { m.data()[k] = v; });
  return m;
}

void write_vector(std::ostream& os, const ComplexVector& x) {
  write_entries(os, x.size(), 1, x.data());
}

ComplexVector read_vector(std::istream& is) {
  const auto [rows, cols] = read_header(is);
  if (cols != 1) throw ParseError(1, "cols", "a vector must have exactly one column");
  ComplexVector x(rows);
  read_entries(is, rows, [&](std::size_t k, Complex v) { x[k] = v; });
  return x;
}

}  // namespace rbd
