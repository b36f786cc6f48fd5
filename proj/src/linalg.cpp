#include <cmath>

#include "qoc/kernels.hpp"
#include "qoc/linalg.hpp"

namespace qoc {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw dim_error("matmul: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  kernels::cgemm(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x) {
  if (a.cols() != x.dim()) throw dim_error("matvec: dimension mismatch");
  ComplexVector y(a.rows());
  kernels::cgemv(a.data(), x.data(), y.data(), a.rows(), a.cols());
  return y;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

cplx trace(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw dim_error("trace: matrix not square");
  cplx t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

cplx inner(const ComplexVector& x, const ComplexVector& y) {
  if (x.dim() != y.dim()) throw dim_error("inner: dimension mismatch");
  return kernels::active().cdotc(x.data(), y.data(), x.dim());
}

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_shape(b);
  return kernels::active().cdotc(a.data(), b.data(), a.size());
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.data()[i]);
  return std::sqrt(s);
}

double norm(const ComplexVector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += std::norm(x[i]);
  return std::sqrt(s);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

ComplexVector kron(const ComplexVector& x, const ComplexVector& y) {
  ComplexVector r(x.dim() * y.dim());
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < y.dim(); ++j) r[i * y.dim() + j] = x[i] * y[j];
  return r;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r = a;
  r += b;
  return r;
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r = a;
  r -= b;
  return r;
}

ComplexMatrix scale(cplx s, const ComplexMatrix& a) {
  ComplexMatrix r = a;
  r *= s;
  return r;
}

ComplexVector scale(cplx s, const ComplexVector& x) {
  ComplexVector r = x;
  r *= s;
  return r;
}

double hermiticity_defect(const ComplexMatrix& a) {
  return frobenius_norm(sub(a, adjoint(a)));
}

double unitarity_defect(const ComplexMatrix& a) {
  ComplexMatrix g = matmul(adjoint(a), a);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frobenius_norm(g);
}

RealMatrix real_matmul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw dim_error("real_matmul: dimension mismatch");
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> real_matvec(const RealMatrix& a, const std::vector<double>& x) {
  if (a.cols() != x.size()) throw dim_error("real_matvec: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

RealMatrix realify(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw dim_error("realify: matrix not square");
  const std::size_t l = h.rows();
  RealMatrix r(2 * l, 2 * l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      const double re = h(i, j).real(), im = h(i, j).imag();
      r(i, j) = re;
      r(i, j + l) = -im;
      r(i + l, j) = im;
      r(i + l, j + l) = re;
    }
  return r;
}

std::vector<double> realify_state(const ComplexVector& psi) {
  std::vector<double> r(2 * psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    r[i] = psi[i].real();
    r[i + psi.dim()] = psi[i].imag();
  }
  return r;
}

}  // namespace qoc
