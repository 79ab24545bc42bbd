#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "critreg/kernels.hpp"

using namespace crg::kernels;

namespace {

double brute_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double brute_shift(const std::vector<double>& f, std::size_t d) {
  double m = 0.0;
  for (std::size_t i = 0; i + d < f.size(); ++i) m = std::max(m, std::abs(f[i + d] - f[i]));
  return m;
}

double brute_ratio(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& w) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / w[i]);
  return m;
}

std::vector<Backend> available() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
    if (backend_available(b)) out.push_back(b);
  return out;
}

}  // namespace

TEST_CASE("scalar kernels match the brute-force loops") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 129u}) {
    std::vector<double> a(n), b(n), w(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = U(rng), b[i] = U(rng), w[i] = 0.1 + std::abs(U(rng));
    CHECK(scalar::max_abs_diff(a.data(), b.data(), n) == brute_abs(a, b));
    CHECK(scalar::max_ratio(a.data(), b.data(), w.data(), n) == brute_ratio(a, b, w));
    for (std::size_t d : {1u, 2u, 5u})
      CHECK(scalar::max_shift_diff(a.data(), n, d) == brute_shift(a, d));
  }
}

TEST_CASE("every available backend agrees bit for bit with scalar") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1e3, 1e3);
  auto backs = available();
  CHECK(backs.front() == Backend::scalar);
  for (std::size_t n = 0; n <= 67; ++n) {
    std::vector<double> a(n), b(n), w(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = U(rng), b[i] = U(rng), w[i] = 1e-3 + std::abs(U(rng));
    double ref_abs = max_abs_diff(Backend::scalar, a.data(), b.data(), n);
    double ref_ratio = max_ratio(Backend::scalar, a.data(), b.data(), w.data(), n);
    for (Backend be : backs) {
      CAPTURE(backend_name(be));
      CAPTURE(n);
      CHECK(max_abs_diff(be, a.data(), b.data(), n) == ref_abs);
      CHECK(max_ratio(be, a.data(), b.data(), w.data(), n) == ref_ratio);
      for (std::size_t d = 1; d < 6; ++d)
        CHECK(max_shift_diff(be, a.data(), n, d) == max_shift_diff(Backend::scalar, a.data(), n, d));
    }
  }
}

TEST_CASE("dispatch uses an available backend") {
  Backend b = active_backend();
  CHECK(backend_available(b));
  std::vector<double> a{1.0, -2.0, 3.0, 0.5, 9.0}, z(5, 0.0);
  CHECK(max_abs_diff(a.data(), z.data(), a.size()) == 9.0);
  CHECK(max_shift_diff(a.data(), a.size(), 1) == 8.5);
}

TEST_CASE("shift larger than the array gives zero") {
  std::vector<double> a{1.0, 2.0};
  for (Backend be : available()) CHECK(max_shift_diff(be, a.data(), a.size(), 5) == 0.0);
}
