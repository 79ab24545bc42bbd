#pragma once
#include <cstddef>
#include <string>

// Data-parallel reductions used by the norm and fastness estimators.
// Each kernel has a scalar reference and optional SIMD variants picked at runtime.
namespace crg::kernels {

enum class Backend { scalar, avx2, neon };

Backend active_backend();
std::string backend_name(Backend b);
bool backend_available(Backend b);

// max_i |a[i] - b[i]|
double max_abs_diff(const double* a, const double* b, std::size_t n);
// max_i |f[i+d] - f[i]|, i + d < n
double max_shift_diff(const double* f, std::size_t n, std::size_t d);
// max_i |a[i] - b[i]| / w[i], w[i] > 0
double max_ratio(const double* a, const double* b, const double* w, std::size_t n);

// Explicit-backend entry points, used by the equivalence tests.
double max_abs_diff(Backend be, const double* a, const double* b, std::size_t n);
double max_shift_diff(Backend be, const double* f, std::size_t n, std::size_t d);
double max_ratio(Backend be, const double* a, const double* b, const double* w, std::size_t n);

namespace scalar {
double max_abs_diff(const double* a, const double* b, std::size_t n);
double max_shift_diff(const double* f, std::size_t n, std::size_t d);
double max_ratio(const double* a, const double* b, const double* w, std::size_t n);
}

namespace avx2 {
double max_abs_diff(const double* a, const double* b, std::size_t n);
double max_shift_diff(const double* f, std::size_t n, std::size_t d);
double max_ratio(const double* a, const double* b, const double* w, std::size_t n);
}

namespace neon {
double max_abs_diff(const double* a, const double* b, std::size_t n);
double max_shift_diff(const double* f, std::size_t n, std::size_t d);
double max_ratio(const double* a, const double* b, const double* w, std::size_t n);
}

}  // namespace crg::kernels
