#include <cstdlib>
#include <cstring>

#include "qoc/kernels.hpp"

namespace qoc::kernels {
namespace {

const KernelTable* select_table() {
  const char* forced = std::getenv("QOC_SIMD");
  if (forced && std::strcmp(forced, "scalar") == 0) return &scalar_table();
#ifdef QOC_BUILD_AVX2
  if (forced && std::strcmp(forced, "avx2") == 0) return &avx2_table();
  if (!forced && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &avx2_table();
#endif
  return &scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable* t = select_table();
  return *t;
}

const char* active_name() { return active().name; }

void cgemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
           std::size_t n) {
  const KernelTable& kt = active();
  std::memset(c, 0, m * n * sizeof(cplx));
  // i-k-j order: C[i,:] += A[i,k] * B[k,:], streams rows of B through caxpy.
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    const cplx* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      if (arow[p] != cplx(0.0)) kt.caxpy(arow[p], b + p * n, crow, n);
    }
  }
}

void cgemv(const cplx* a, const cplx* x, cplx* y, std::size_t m, std::size_t n) {
  const KernelTable& kt = active();
  for (std::size_t i = 0; i < m; ++i) y[i] = kt.cdotu(a + i * n, x, n);
}

}  // namespace qoc::kernels
