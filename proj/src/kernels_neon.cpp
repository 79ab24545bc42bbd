#include <arm_neon.h>

#include <cmath>

#include "critreg/kernels.hpp"

namespace crg::kernels::neon {

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double m = vmaxvq_f64(acc);
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
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t r = vdivq_f64(vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), vld1q_f64(w + i));
    acc = vmaxq_f64(acc, r);
  }
  double m = vmaxvq_f64(acc);
  for (; i < n; ++i) {
    double r = std::fabs(a[i] - b[i]) / w[i];
    if (r > m) m = r;
  }
  return m;
}

}  // namespace crg::kernels::neon
