#include <immintrin.h>

#include "quadclip/oracles.hpp"

namespace quadclip::detail {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

#if defined(__x86_64__) || defined(__i386__)

namespace {

__attribute__((target("avx2"))) inline __m256d affine(const double* c, __m256d x, __m256d y, __m256d z) {
  // same association as the scalar kernel: ((c0 x + c1 y) + c2 z) + c3, no fused ops
  __m256d r = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(c[0]), x), _mm256_mul_pd(_mm256_set1_pd(c[1]), y));
  r = _mm256_add_pd(r, _mm256_mul_pd(_mm256_set1_pd(c[2]), z));
  return _mm256_add_pd(r, _mm256_set1_pd(c[3]));
}

}  // namespace

__attribute__((target("avx2"))) void classify_avx2(const RayTriangles& t, const double* x, const double* y,
                                                   const double* z, std::size_t n, double* winding, uint8_t* tie) {
  const __m256d one = _mm256_set1_pd(1.0), zero = _mm256_setzero_pd();
  const __m256d tol = _mm256_set1_pd(1e-10), ntol = _mm256_set1_pd(-1e-10);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d px = _mm256_loadu_pd(x + i), py = _mm256_loadu_pd(y + i), pz = _mm256_loadu_pd(z + i);
    __m256d w = zero, amb = zero;
    for (std::size_t k = 0; k < t.count; ++k) {
      const double* c = &t.coef[13 * k];
      const __m256d u = affine(c, px, py, pz);
      const __m256d v = affine(c + 4, px, py, pz);
      const __m256d tau = affine(c + 8, px, py, pz);
      const __m256d s = _mm256_sub_pd(one, _mm256_add_pd(u, v));
      const __m256d near = _mm256_and_pd(_mm256_and_pd(_mm256_cmp_pd(u, ntol, _CMP_GT_OQ), _mm256_cmp_pd(v, ntol, _CMP_GT_OQ)),
                                         _mm256_and_pd(_mm256_cmp_pd(s, ntol, _CMP_GT_OQ), _mm256_cmp_pd(tau, ntol, _CMP_GT_OQ)));
      const __m256d edge = _mm256_or_pd(_mm256_or_pd(_mm256_cmp_pd(u, tol, _CMP_LT_OQ), _mm256_cmp_pd(v, tol, _CMP_LT_OQ)),
                                        _mm256_or_pd(_mm256_cmp_pd(s, tol, _CMP_LT_OQ), _mm256_cmp_pd(tau, tol, _CMP_LT_OQ)));
      amb = _mm256_or_pd(amb, _mm256_and_pd(near, edge));
      const __m256d hit = _mm256_and_pd(_mm256_and_pd(_mm256_cmp_pd(u, zero, _CMP_GE_OQ), _mm256_cmp_pd(v, zero, _CMP_GE_OQ)),
                                        _mm256_and_pd(_mm256_cmp_pd(s, zero, _CMP_GE_OQ), _mm256_cmp_pd(tau, zero, _CMP_GT_OQ)));
      w = _mm256_add_pd(w, _mm256_and_pd(hit, _mm256_set1_pd(c[12])));
    }
    _mm256_storeu_pd(winding + i, w);
    const int mask = _mm256_movemask_pd(amb);
    for (int j = 0; j < 4; ++j) tie[i + j] = (mask >> j) & 1;
  }
  if (i < n) classify_scalar(t, x + i, y + i, z + i, n - i, winding + i, tie + i);
}

#else

void classify_avx2(const RayTriangles& t, const double* x, const double* y, const double* z, std::size_t n,
                   double* winding, uint8_t* tie) {
  classify_scalar(t, x, y, z, n, winding, tie);
}

#endif

}  // namespace quadclip::detail
