#pragma once
#include <array>

// Truncated Taylor arithmetic: c[j] = f^(j)(x0) / j!.
namespace crg {

constexpr int kMaxJet = 8;

struct Jet {
  int n = 0;  // highest order carried
  std::array<double, kMaxJet + 1> c{};

  static Jet constant(double v, int n);
  static Jet variable(double x, int n);
  double value() const { return c[0]; }
  // j-th derivative
  double derivative(int j) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double v) { c[0] += v; return *this; }
  Jet& operator*=(double v);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator+(Jet a, double v);
Jet operator+(double v, Jet a);
Jet operator-(Jet a, double v);
Jet operator-(double v, const Jet& a);
Jet operator*(Jet a, double v);
Jet operator*(double v, Jet a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator/(double v, const Jet& b);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet tanh(const Jet& a);
Jet atanh(const Jet& a);
Jet log1p(const Jet& a);
Jet pow(const Jet& a, double r);

// sum_j outer[j] (inner - inner.c[0])^j, outer being Taylor coefficients at inner.c[0]
Jet compose_series(const std::array<double, kMaxJet + 1>& outer, const Jet& inner);
// series reversion: given Taylor coefficients of f at x0 (f'(x0) != 0) and the jet of y,
// returns the jet of f^{-1}(y) whose value is x0
Jet invert_series(const std::array<double, kMaxJet + 1>& f, int n, double x0, const Jet& y);

}  // namespace crg
