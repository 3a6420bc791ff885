// AVX2 variant of the half-flux kernel. Mirrors kernels_detail.hpp
// operation for operation; no FMA so both paths round identically.

#include "kernels_detail.hpp"

#ifdef __x86_64__
#include <immintrin.h>
#endif

namespace raceway::kernels {

#ifdef __x86_64__

void half_fluxes_avx2(int n, const double* h, const double* u, const double* c,
                      double* fph, double* fpq, double* fmh, double* fmq) {
  const __m256d s3 = _mm256_set1_pd(kSqrt3);
  const __m256d ns3 = _mm256_set1_pd(-kSqrt3);
  const __m256d inv2s3 = _mm256_set1_pd(kInv2Sqrt3);
  const __m256d tiny = _mm256_set1_pd(1e-300);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d third = _mm256_set1_pd(1.0 / 3.0);
  const __m256d s3x3 = _mm256_set1_pd(3.0 * kSqrt3);
  const __m256d zero = _mm256_setzero_pd();

  int j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d hv = _mm256_loadu_pd(h + j);
    const __m256d uv = _mm256_loadu_pd(u + j);
    const __m256d cv = _mm256_loadu_pd(c + j);

    const __m256d safe_c = _mm256_max_pd(cv, tiny);
    const __m256d a =
        _mm256_min_pd(s3, _mm256_max_pd(ns3, _mm256_sub_pd(zero, _mm256_div_pd(uv, safe_c))));
    const __m256d a2 = _mm256_mul_pd(a, a);
    const __m256d a3 = _mm256_mul_pd(a2, a);
    const __m256d k = _mm256_mul_pd(inv2s3, hv);
    const __m256d uu = _mm256_mul_pd(uv, uv);
    const __m256d uc = _mm256_mul_pd(uv, cv);
    const __m256d cc = _mm256_mul_pd(cv, cv);
    const __m256d dp = _mm256_sub_pd(s3, a);
    const __m256d wp = _mm256_sub_pd(three, a2);
    const __m256d dm = _mm256_add_pd(a, s3);
    const __m256d wm = _mm256_sub_pd(a2, three);

    __m256d r = _mm256_add_pd(_mm256_mul_pd(uv, dp), _mm256_mul_pd(cv, _mm256_mul_pd(half, wp)));
    _mm256_storeu_pd(fph + j, _mm256_mul_pd(k, r));

    r = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(uu, dp), _mm256_mul_pd(uc, wp)),
                      _mm256_mul_pd(cc, _mm256_mul_pd(_mm256_sub_pd(s3x3, a3), third)));
    _mm256_storeu_pd(fpq + j, _mm256_mul_pd(k, r));

    r = _mm256_add_pd(_mm256_mul_pd(uv, dm), _mm256_mul_pd(cv, _mm256_mul_pd(half, wm)));
    _mm256_storeu_pd(fmh + j, _mm256_mul_pd(k, r));

    r = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(uu, dm), _mm256_mul_pd(uc, wm)),
                      _mm256_mul_pd(cc, _mm256_mul_pd(_mm256_add_pd(a3, s3x3), third)));
    _mm256_storeu_pd(fmq + j, _mm256_mul_pd(k, r));
  }
  for (; j < n; ++j) detail::half_flux_one(h[j], u[j], c[j], fph[j], fpq[j], fmh[j], fmq[j]);
}

#else  // non-x86 hosts fall back to the reference path

void half_fluxes_avx2(int n, const double* h, const double* u, const double* c,
                      double* fph, double* fpq, double* fmh, double* fmq) {
  half_fluxes_scalar(n, h, u, c, fph, fpq, fmh, fmq);
}

#endif

}  // namespace raceway::kernels
