#ifndef QOC_KERNELS_HPP
#define QOC_KERNELS_HPP

#include <cstddef>

#include "qoc/types.hpp"

namespace qoc::kernels {

// Inner-loop kernels for dense complex arithmetic. A scalar reference
// implementation is always available; an AVX2 variant is selected at
// runtime when the CPU supports it. Set QOC_SIMD=scalar to force the
// reference path.

struct KernelTable {
  // y += a * x
  void (*caxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // sum_i x[i] * y[i]  (no conjugation)
  cplx (*cdotu)(const cplx* x, const cplx* y, std::size_t n);
  // sum_i conj(x[i]) * y[i]
  cplx (*cdotc)(const cplx* x, const cplx* y, std::size_t n);
  const char* name;
};

const KernelTable& scalar_table();
#ifdef QOC_BUILD_AVX2
const KernelTable& avx2_table();
#endif

// Table chosen at first use from CPU features and QOC_SIMD.
const KernelTable& active();
const char* active_name();

// Composite kernels built on the table above.

// C = A * B, A is m x k, B is k x n, all row-major. C must not alias A or B.
void cgemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
           std::size_t n);
// y = A * x, A is m x n row-major. y must not alias x.
void cgemv(const cplx* a, const cplx* x, cplx* y, std::size_t m, std::size_t n);

}  // namespace qoc::kernels

#endif
