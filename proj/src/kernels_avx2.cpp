#include <immintrin.h>

#include "qoc/kernels.hpp"

// AVX2/FMA variants. Complex doubles are processed two at a time from the
// interleaved (re, im) layout guaranteed by std::complex<double>.

namespace qoc::kernels {
namespace {

inline const double* as_d(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_d(cplx* p) { return reinterpret_cast<double*>(p); }

void caxpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xd = as_d(x);
  double* yd = as_d(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0b0101);  // [xi, xr] per pair
    __m256d t = _mm256_mul_pd(ai, xs);
    // even: ar*xr - ai*xi, odd: ar*xi + ai*xr
    __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

cplx cdotu_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_d(x);
  const double* yd = as_d(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xr = _mm256_movedup_pd(xv);             // [xr, xr]
    __m256d xi = _mm256_permute_pd(xv, 0b1111);     // [xi, xi]
    __m256d t = _mm256_mul_pd(xi, _mm256_permute_pd(yv, 0b0101));
    acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(xr, yv, t));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  cplx result(lanes[0] + lanes[2], lanes[1] + lanes[3]);
  for (; i < n; ++i) result += x[i] * y[i];
  return result;
}

cplx cdotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_d(x);
  const double* yd = as_d(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xr = _mm256_movedup_pd(xv);
    __m256d xi = _mm256_permute_pd(xv, 0b1111);
    __m256d t = _mm256_mul_pd(xi, _mm256_permute_pd(yv, 0b0101));
    // even: xr*yr + xi*yi, odd: xr*yi - xi*yr
    acc = _mm256_add_pd(acc, _mm256_fmsubadd_pd(xr, yv, t));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  cplx result(lanes[0] + lanes[2], lanes[1] + lanes[3]);
  for (; i < n; ++i) result += std::conj(x[i]) * y[i];
  return result;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{caxpy_avx2, cdotu_avx2, cdotc_avx2, "avx2"};
  return t;
}

}  // namespace qoc::kernels
