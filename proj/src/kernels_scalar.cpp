#include "qoc/kernels.hpp"

namespace qoc::kernels {
namespace {

void caxpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx cdotu_scalar(const cplx* x, const cplx* y, std::size_t n) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

cplx cdotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{caxpy_scalar, cdotu_scalar, cdotc_scalar, "scalar"};
  return t;
}

}  // namespace qoc::kernels
