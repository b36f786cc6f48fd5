#ifndef QOC_LINALG_HPP
#define QOC_LINALG_HPP

#include "qoc/types.hpp"

namespace qoc {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);

ComplexMatrix adjoint(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);

/// x^dagger y; conjugate-linear in the first argument.
cplx inner(const ComplexVector& x, const ComplexVector& y);
/// Hilbert-Schmidt inner product tr(A^dagger B).
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_norm(const ComplexMatrix& a);
double norm(const ComplexVector& x);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& x, const ComplexVector& y);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(cplx s, const ComplexMatrix& a);
ComplexVector scale(cplx s, const ComplexVector& x);

/// Hermiticity defect ||A - A^dagger||_F.
double hermiticity_defect(const ComplexMatrix& a);
/// Unitarity defect ||A^dagger A - I||_F.
double unitarity_defect(const ComplexMatrix& a);

/// Real matrix, row-major; used only for the complex->real isomorphism.
class RealMatrix {
public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

RealMatrix real_matmul(const RealMatrix& a, const RealMatrix& b);
std::vector<double> real_matvec(const RealMatrix& a, const std::vector<double>& x);

/// 2l x 2l block form [[Re H, -Im H], [Im H, Re H]].
RealMatrix realify(const ComplexMatrix& h);
/// (Re psi, Im psi)^t.
std::vector<double> realify_state(const ComplexVector& psi);

}  // namespace qoc

#endif
