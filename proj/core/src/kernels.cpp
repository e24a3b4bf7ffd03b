#include <cmath>
#include <string>

#include "rbd/detect.hpp"
#include "rbd/errors.hpp"

namespace rbd {

std::string_view to_string(Detector d) noexcept {
  switch (d) {
    case Detector::Cholesky: return "cholesky";
    case Detector::Minres: return "minres";
    case Detector::Gmres: return "gmres";
    case Detector::Cr: return "cr";
  }
  return "unknown";
}

Detector parse_detector(std::string_view name) {
  if (name == "cholesky") return Detector::Cholesky;
  if (name == "minres") return Detector::Minres;
  if (name == "gmres") return Detector::Gmres;
  if (name == "cr") return Detector::Cr;
  throw DomainError("unknown detector '" + std::string(name) +
                    "' (expected cholesky | minres | gmres | cr)");
}

MmseProblem MmseProblem::from_system(ComplexMatrix a, ComplexVector y_mf, double sigma2) {
  if (!a.is_square() || a.rows() != y_mf.size() || a.rows() == 0)
    throw DimensionError("MmseProblem: A must be square and match y_mf");
  if (!is_hermitian(a)) throw NotHermitianError("MmseProblem: A is not Hermitian");
  if (!(sigma2 >= 0.0)) throw DomainError("MmseProblem: sigma2 must be >= 0");
  MmseProblem p;
  p.m = a.rows();
  p.a = std::move(a);
  p.y_mf = std::move(y_mf);
  p.sigma2 = sigma2;
  return p;
}

MmseProblem preprocess(const ComplexMatrix& h, const ComplexVector& y, double sigma2) {
  const std::size_t n = h.rows();
  const std::size_t m = h.cols();
  if (m == 0 || n < m) throw DimensionError("preprocess: H must be N x M with N >= M >= 1");
  if (y.size() != n) throw DimensionError("preprocess: y length must equal N");
  if (!(sigma2 >= 0.0)) throw DomainError("preprocess: sigma2 must be >= 0");

  MmseProblem p;
  p.n = n;
  p.m = m;
  p.sigma2 = sigma2;
  p.a = ComplexMatrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const Complex* hj = h.col(j).data();
    for (std::size_t i = j; i < m; ++i) {
      const Complex* hi = h.col(i).data();
      Complex acc{};
      for (std::size_t r = 0; r < n; ++r) acc += std::conj(hi[r]) * hj[r];
      if (i == j) {
        p.a(i, i) = acc.real() + sigma2;
      } else {
        p.a(i, j) = acc;
        p.a(j, i) = std::conj(acc);
      }
    }
  }
  p.y_mf = ComplexVector(m);
  for (std::size_t i = 0; i < m; ++i) p.y_mf[i] = inner_hermitian(h.col(i), y.span());
  return p;
}

void kernel_mac_inplace(std::span<Complex> x, Complex a, std::span<const Complex> b,
                        OpCounter* counter) {
  if (x.size() != b.size()) throw DimensionError("kernel_mac: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += a * b[i];
  count_mults(counter, x.size());
  count_adds(counter, x.size());
}

ComplexVector kernel_mac(const ComplexVector& x, Complex a, const ComplexVector& b,
                         OpCounter* counter) {
  ComplexVector out = x;
  kernel_mac_inplace(out.span(), a, b.span(), counter);
  return out;
}

Complex kernel_coeff(std::span<const Complex> m, std::span<const Complex> n,
                     std::span<const Complex> p, std::span<const Complex> q, OpCounter* counter) {
  const Complex num = inner_hermitian(m, n, counter);
  const Complex den = inner_hermitian(p, q, counter);
  if (std::abs(den) < 1e-300) throw SingularityError("kernel_coeff: p^H q is zero");
  count_mults(counter, 1);  // division
  return num / den;
}

}  // namespace rbd
