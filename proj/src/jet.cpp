#include "critreg/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace crg {

Jet Jet::constant(double v, int n) {
  if (n < 0 || n > kMaxJet) throw std::invalid_argument("jet order out of range");
  Jet j;
  j.n = n;
  j.c[0] = v;
  return j;
}

Jet Jet::variable(double x, int n) {
  Jet j = constant(x, n);
  if (n >= 1) j.c[1] = 1.0;
  return j;
}

double Jet::derivative(int j) const {
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f *= i;
  return c[j] * f;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (int i = 0; i <= n; ++i) r.c[i] = -r.c[i];
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  for (int i = 0; i <= n; ++i) c[i] += o.c[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int i = 0; i <= n; ++i) c[i] -= o.c[i];
  return *this;
}

Jet& Jet::operator*=(double v) {
  for (int i = 0; i <= n; ++i) c[i] *= v;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double v) { return a += v; }
Jet operator+(double v, Jet a) { return a += v; }
Jet operator-(Jet a, double v) { return a += -v; }
Jet operator-(double v, const Jet& a) { return (-a) + v; }
Jet operator*(Jet a, double v) { return a *= v; }
Jet operator*(double v, Jet a) { return a *= v; }

Jet operator*(const Jet& a, const Jet& b) {
  Jet r = Jet::constant(0.0, a.n);
  for (int k = 0; k <= a.n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    r.c[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet r = Jet::constant(0.0, a.n);
  for (int k = 0; k <= a.n; ++k) {
    double s = a.c[k];
    for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
    r.c[k] = s / b.c[0];
  }
  return r;
}

Jet operator/(double v, const Jet& b) { return Jet::constant(v, b.n) / b; }

Jet exp(const Jet& a) {
  Jet e = Jet::constant(std::exp(a.c[0]), a.n);
  for (int k = 1; k <= a.n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a.c[j] * e.c[k - j];
    e.c[k] = s / k;
  }
  return e;
}

Jet log(const Jet& a) {
  Jet l = Jet::constant(std::log(a.c[0]), a.n);
  for (int k = 1; k <= a.n; ++k) {
    double s = 0.0;
    for (int j = 1; j < k; ++j) s += j * l.c[j] * a.c[k - j];
    l.c[k] = (a.c[k] - s / k) / a.c[0];
  }
  return l;
}

Jet log1p(const Jet& a) {
  Jet b = a + 1.0;
  Jet l = log(b);
  l.c[0] = std::log1p(a.c[0]);
  return l;
}

Jet tanh(const Jet& a) {
  Jet t = Jet::constant(std::tanh(a.c[0]), a.n);
  Jet s = Jet::constant(1.0 - t.c[0] * t.c[0], a.n);  // 1 - t^2
  for (int k = 1; k <= a.n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a.c[j] * s.c[k - j];
    t.c[k] = acc / k;
    double q = 0.0;
    for (int j = 0; j <= k; ++j) q += t.c[j] * t.c[k - j];
    s.c[k] = -q;
  }
  return t;
}

Jet atanh(const Jet& u) {
  Jet r = Jet::constant(std::atanh(u.c[0]), u.n);
  if (u.n == 0) return r;
  // w = u' / (1 - u^2), then integrate
  Jet du = Jet::constant(0.0, u.n - 1);
  for (int k = 0; k < u.n; ++k) du.c[k] = (k + 1) * u.c[k + 1];
  Jet uu = Jet::constant(0.0, u.n - 1);
  for (int k = 0; k < u.n; ++k) uu.c[k] = u.c[k];
  Jet den = 1.0 - uu * uu;
  Jet w = du / den;
  for (int k = 1; k <= u.n; ++k) r.c[k] = w.c[k - 1] / k;
  return r;
}

Jet pow(const Jet& a, double r) {
  Jet p = exp(r * log(a));
  p.c[0] = std::pow(a.c[0], r);
  return p;
}

Jet compose_series(const std::array<double, kMaxJet + 1>& outer, const Jet& inner) {
  Jet d = inner;
  d.c[0] = 0.0;
  Jet r = Jet::constant(outer[inner.n], inner.n);
  for (int j = inner.n - 1; j >= 0; --j) {
    r = r * d;
    r.c[0] += outer[j];
  }
  return r;
}

Jet invert_series(const std::array<double, kMaxJet + 1>& f, int n, double x0, const Jet& y) {
  if (f[1] == 0.0) throw std::domain_error("series reversion with vanishing derivative");
  // g = f^{-1} around f[0]: solve f(x0 + h) = f[0] + t for h(t) as a power series
  std::array<double, kMaxJet + 1> g{};
  g[0] = x0;
  // Newton-free iterative reversion: h = (t - sum_{j>=2} f_j h^j) / f_1
  Jet t = Jet::variable(0.0, n);
  Jet h = Jet::constant(0.0, n);
  for (int it = 0; it <= n; ++it) {
    Jet acc = Jet::constant(0.0, n);
    Jet hp = h * h;
    for (int j = 2; j <= n; ++j) {
      acc += f[j] * hp;
      hp = hp * h;
    }
    h = (t - acc) * (1.0 / f[1]);
  }
  for (int j = 1; j <= n; ++j) g[j] = h.c[j];
  Jet yy = y;
  yy.c[0] = f[0];
  Jet r = compose_series(g, yy);
  return r;
}

}  // namespace crg
