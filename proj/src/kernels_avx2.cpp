#include <immintrin.h>

#include <cmath>

#include "critreg/kernels.hpp"

namespace crg::kernels::avx2 {

static inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_pd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

double max_shift_diff(const double* f, std::size_t n, std::size_t d) {
  if (d >= n) return 0.0;
  return max_abs_diff(f + d, f, n - d);
}

double max_ratio(const double* a, const double* b, const double* w, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    __m256d r = _mm256_div_pd(_mm256_andnot_pd(sign, d), _mm256_loadu_pd(w + i));
    acc = _mm256_max_pd(acc, r);
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    double r = std::fabs(a[i] - b[i]) / w[i];
    if (r > m) m = r;
  }
  return m;
}

}  // namespace crg::kernels::avx2
