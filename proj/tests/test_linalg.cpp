#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qoc/model.hpp"
#include "test_helpers.hpp"

using namespace qoc;
using namespace qoc::test;

namespace {

// Brute-force oracles, independent of the library kernels.
ComplexMatrix matmul_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c = ComplexMatrix::zeros(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

ComplexVector matvec_oracle(const ComplexMatrix& a, const ComplexVector& x) {
  ComplexVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

}  // namespace

TEST_CASE("matmul: identity and Pauli involution") {
  const ComplexMatrix sx = pauli(PauliAxis::X);
  CHECK(max_abs_diff(matmul(ComplexMatrix::identity(2), sx), sx) == 0.0);
  CHECK(max_abs_diff(matmul(sx, sx), ComplexMatrix::identity(2)) < 1e-15);
}

TEST_CASE("matmul: random 3x3 vs triple-loop oracle") {
  rng(101);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = random_matrix(3, 3), b = random_matrix(3, 3);
    CHECK(max_abs_diff(matmul(a, b), matmul_oracle(a, b)) < 1e-13);
  }
}

TEST_CASE("matmul: rectangular shapes and dimension errors") {
  rng(102);
  const ComplexMatrix a = random_matrix(2, 5), b = random_matrix(5, 3);
  CHECK(max_abs_diff(matmul(a, b), matmul_oracle(a, b)) < 1e-13);
  CHECK_THROWS_AS(matmul(a, random_matrix(4, 3)), dim_error);
  CHECK_THROWS_AS(matvec(a, random_vector(4)), dim_error);
}

TEST_CASE("matmul associativity to 1e-12 relative") {
  rng(103);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_matrix(4, 4), b = random_matrix(4, 4), c = random_matrix(4, 4);
    const ComplexMatrix lhs = matmul(matmul(a, b), c), rhs = matmul(a, matmul(b, c));
    CHECK(max_abs_diff(lhs, rhs) / frobenius_norm(lhs) < 1e-12);
  }
}

TEST_CASE("matvec: basis action and loop oracle") {
  const ComplexMatrix sx = pauli(PauliAxis::X);
  ComplexVector e0(2);
  e0[0] = 1.0;
  const ComplexVector y = matvec(sx, e0);
  CHECK(std::abs(y[0]) < 1e-15);
  CHECK(std::abs(y[1] - 1.0) < 1e-15);
  rng(104);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = random_matrix(4, 4);
    const ComplexVector x = random_vector(4);
    CHECK(max_abs_diff(matvec(a, x), matvec_oracle(a, x)) < 1e-13);
  }
}

TEST_CASE("adjoint, trace, inner, hs_inner, frobenius_norm") {
  rng(105);
  const ComplexMatrix a = random_matrix(4, 4);
  CHECK(max_abs_diff(adjoint(adjoint(a)), a) == 0.0);
  CHECK(std::abs(trace(ComplexMatrix::identity(5)) - 5.0) == 0.0);

  const ComplexVector x = random_vector(6);
  CHECK(std::abs(inner(x, x).imag()) < 1e-15);
  CHECK(inner(x, x).real() == doctest::Approx(norm(x) * norm(x)).epsilon(1e-12));

  // inner is conjugate-linear in the first argument.
  const ComplexVector y = random_vector(6);
  const cplx alpha = random_cplx();
  CHECK(std::abs(inner(scale(alpha, x), y) - std::conj(alpha) * inner(x, y)) < 1e-13);

  CHECK(std::abs(hs_inner(pauli(PauliAxis::X), pauli(PauliAxis::X)) - 2.0) < 1e-15);
  // tr(AB) == tr(BA)
  const ComplexMatrix b = random_matrix(4, 4);
  CHECK(std::abs(trace(matmul(a, b)) - trace(matmul(b, a))) < 1e-12);
}

TEST_CASE("kron: hand expansions and mixed-product property") {
  const ComplexMatrix iz = kron(ComplexMatrix::identity(2), pauli(PauliAxis::Z));
  const double want[4] = {1.0, -1.0, 1.0, -1.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(iz(i, i).real() == doctest::Approx(want[i]));

  rng(106);
  const ComplexMatrix a = random_matrix(2, 2);
  CHECK(max_abs_diff(kron(a, ComplexMatrix::identity(1)), a) == 0.0);

  const ComplexMatrix b = random_matrix(2, 2);
  const ComplexVector x = random_vector(2), y = random_vector(2);
  const ComplexVector lhs = matvec(kron(a, b), kron(x, y));
  const ComplexVector rhs = kron(matvec(a, x), matvec(b, y));
  CHECK(max_abs_diff(lhs, rhs) < 1e-13);
}

TEST_CASE("realify: structure and homomorphism") {
  // realify(i * I_1) = [[0, -1], [1, 0]]
  ComplexMatrix i1(1, 1);
  i1(0, 0) = cplx(0.0, 1.0);
  const RealMatrix r = realify(i1);
  CHECK(r(0, 0) == 0.0);
  CHECK(r(0, 1) == -1.0);
  CHECK(r(1, 0) == 1.0);
  CHECK(r(1, 1) == 0.0);

  const RealMatrix rid = realify(ComplexMatrix::identity(3));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(rid(i, j) == (i == j ? 1.0 : 0.0));

  rng(107);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_matrix(3, 3), b = random_matrix(3, 3);
    const RealMatrix lhs = realify(matmul(a, b));
    const RealMatrix rhs = real_matmul(realify(a), realify(b));
    double m = 0.0;
    for (std::size_t i = 0; i < lhs.rows(); ++i)
      for (std::size_t j = 0; j < lhs.cols(); ++j)
        m = std::max(m, std::abs(lhs(i, j) - rhs(i, j)));
    CHECK(m < 1e-13);

    const ComplexVector x = random_vector(3);
    const std::vector<double> lv = realify_state(matvec(a, x));
    const std::vector<double> rv = real_matvec(realify(a), realify_state(x));
    for (std::size_t i = 0; i < lv.size(); ++i) CHECK(std::abs(lv[i] - rv[i]) < 1e-13);
  }
}

TEST_CASE("norms and defects") {
  rng(108);
  const ComplexMatrix h = random_hermitian(5);
  CHECK(hermiticity_defect(h) < 1e-15);
  CHECK(hermiticity_defect(random_matrix(5, 5)) > 1e-3);
  CHECK(unitarity_defect(ComplexMatrix::identity(4)) < 1e-15);
}
