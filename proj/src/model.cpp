#include <algorithm>
#include <cmath>

#include "qoc/linalg.hpp"
#include "qoc/model.hpp"

namespace qoc {

double ControlHamiltonian::hermiticity_defect() const {
  double worst = qoc::hermiticity_defect(drift);
  for (const auto& c : controls) worst = std::max(worst, qoc::hermiticity_defect(c));
  return worst;
}

RealGrid bounded_map(const PulseGrid& v) {
  RealGrid u(v.controls(), v.steps());
  for (std::size_t k = 0; k < v.controls(); ++k) {
    const auto& b = v.bounds[k];
    for (std::size_t j = 0; j < v.steps(); ++j)
      u(k, j) = b ? *b * std::tanh(v.raw(k, j)) : v.raw(k, j);
  }
  return u;
}

RealGrid bounded_map_derivative(const PulseGrid& v) {
  RealGrid d(v.controls(), v.steps());
  for (std::size_t k = 0; k < v.controls(); ++k) {
    const auto& b = v.bounds[k];
    for (std::size_t j = 0; j < v.steps(); ++j) {
      if (b) {
        const double t = std::tanh(v.raw(k, j));
        d(k, j) = *b * (1.0 - t * t);
      } else {
        d(k, j) = 1.0;
      }
    }
  }
  return d;
}

RealGrid bounded_map_inverse(const RealGrid& u,
                             const std::vector<std::optional<double>>& bounds) {
  RealGrid v(u.controls(), u.steps());
  for (std::size_t k = 0; k < u.controls(); ++k) {
    for (std::size_t j = 0; j < u.steps(); ++j) {
      if (bounds[k]) {
        const double r = u(k, j) / *bounds[k];
        if (std::abs(r) >= 1.0) throw std::runtime_error("pulse value at or beyond bound");
        v(k, j) = std::atanh(r);
      } else {
        v(k, j) = u(k, j);
      }
    }
  }
  return v;
}

ComplexMatrix hamiltonian_at(const ControlHamiltonian& h, const RealGrid& u,
                             std::size_t j) {
  if (j >= u.steps()) throw std::out_of_range("hamiltonian_at: step index out of range");
  ComplexMatrix hj = h.drift;
  for (std::size_t k = 0; k < h.num_controls(); ++k) {
    const double ukj = u(k, j);
    const cplx* src = h.controls[k].data();
    cplx* dst = hj.data();
    for (std::size_t i = 0; i < hj.size(); ++i) dst[i] += ukj * src[i];
  }
  return hj;
}

ComplexMatrix pauli(PauliAxis axis) {
  ComplexMatrix m(2, 2);
  switch (axis) {
    case PauliAxis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliAxis::Y:
      m(0, 1) = cplx(0.0, -1.0);
      m(1, 0) = cplx(0.0, 1.0);
      break;
    case PauliAxis::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

ComplexMatrix ladder(std::size_t dim) {
  ComplexMatrix b(dim, dim);
  for (std::size_t i = 0; i + 1 < dim; ++i) b(i, i + 1) = std::sqrt(double(i + 1));
  return b;
}

ComplexMatrix number_op(std::size_t dim) {
  ComplexMatrix n(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) n(i, i) = double(i);
  return n;
}

ComplexMatrix anharmonic_term(std::size_t dim, double alpha) {
  ComplexMatrix a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) a(i, i) = 0.5 * alpha * double(i) * (double(i) - 1.0);
  return a;
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t site,
                    const std::vector<std::size_t>& dims) {
  if (site >= dims.size()) throw std::out_of_range("embed: site out of range");
  if (op.rows() != dims[site]) throw dim_error("embed: operator dim does not match site");
  ComplexMatrix result = ComplexMatrix::identity(1);
  for (std::size_t s = 0; s < dims.size(); ++s)
    result = kron(result, s == site ? op : ComplexMatrix::identity(dims[s]));
  return result;
}

CoherentState coherent_state(std::size_t dim, cplx lambda) {
  ComplexVector psi(dim);
  // |lambda> = e^{-|l|^2/2} sum_n lambda^n / sqrt(n!) |n>
  cplx amp = std::exp(-0.5 * std::norm(lambda));
  double kept = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    psi[n] = amp;
    kept += std::norm(amp);
    amp *= lambda / std::sqrt(double(n + 1));
  }
  const double nrm = std::sqrt(kept);
  for (std::size_t n = 0; n < dim; ++n) psi[n] /= nrm;
  return {psi, 1.0 - kept};
}

ComplexVector basis_state(std::size_t dim, std::size_t index) {
  ComplexVector psi(dim);
  psi[index] = 1.0;
  return psi;
}

}  // namespace qoc
