#include "critreg/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace crg::kernels {

namespace scalar {

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
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
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::fabs(a[i] - b[i]) / w[i];
    if (r > m) m = r;
  }
  return m;
}

}  // namespace scalar

#if !defined(CRITREG_HAVE_AVX2)
namespace avx2 {
double max_abs_diff(const double* a, const double* b, std::size_t n) { return scalar::max_abs_diff(a, b, n); }
double max_shift_diff(const double* f, std::size_t n, std::size_t d) { return scalar::max_shift_diff(f, n, d); }
double max_ratio(const double* a, const double* b, const double* w, std::size_t n) {
  return scalar::max_ratio(a, b, w, n);
}
}  // namespace avx2
#endif

#if !defined(CRITREG_HAVE_NEON)
namespace neon {
double max_abs_diff(const double* a, const double* b, std::size_t n) { return scalar::max_abs_diff(a, b, n); }
double max_shift_diff(const double* f, std::size_t n, std::size_t d) { return scalar::max_shift_diff(f, n, d); }
double max_ratio(const double* a, const double* b, const double* w, std::size_t n) {
  return scalar::max_ratio(a, b, w, n);
}
}  // namespace neon
#endif

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(CRITREG_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(CRITREG_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

static Backend detect() {
  // CRITREG_SIMD=scalar forces the reference path.
  if (const char* env = std::getenv("CRITREG_SIMD")) {
    std::string_view v(env);
    if (v == "scalar") return Backend::scalar;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

Backend active_backend() {
  static const Backend b = detect();
  return b;
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

static void require(Backend be) {
  if (!backend_available(be)) throw std::runtime_error("SIMD backend not available: " + backend_name(be));
}

double max_abs_diff(Backend be, const double* a, const double* b, std::size_t n) {
  require(be);
  switch (be) {
    case Backend::avx2: return avx2::max_abs_diff(a, b, n);
    case Backend::neon: return neon::max_abs_diff(a, b, n);
    default: return scalar::max_abs_diff(a, b, n);
  }
}

double max_shift_diff(Backend be, const double* f, std::size_t n, std::size_t d) {
  require(be);
  switch (be) {
    case Backend::avx2: return avx2::max_shift_diff(f, n, d);
    case Backend::neon: return neon::max_shift_diff(f, n, d);
    default: return scalar::max_shift_diff(f, n, d);
  }
}

double max_ratio(Backend be, const double* a, const double* b, const double* w, std::size_t n) {
  require(be);
  switch (be) {
    case Backend::avx2: return avx2::max_ratio(a, b, w, n);
    case Backend::neon: return neon::max_ratio(a, b, w, n);
    default: return scalar::max_ratio(a, b, w, n);
  }
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  return max_abs_diff(active_backend(), a, b, n);
}
double max_shift_diff(const double* f, std::size_t n, std::size_t d) {
  return max_shift_diff(active_backend(), f, n, d);
}
double max_ratio(const double* a, const double* b, const double* w, std::size_t n) {
  return max_ratio(active_backend(), a, b, w, n);
}

}  // namespace crg::kernels
