#pragma once
#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace crg {

// Exact dyadic rational num * 2^exp, normalized so num is odd (or zero with exp 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : num_(v) { normalize(); }  // NOLINT(google-explicit-constructor)
  Dyadic(mpz_class num, long exp) : num_(std::move(num)), exp_(exp) { normalize(); }
  static Dyadic from_double(double x);
  // "13/64", "-3", "5/1"
  static Dyadic parse(const std::string& s);
  static Dyadic pow2(long e) { return Dyadic(1, e); }

  const mpz_class& num() const { return num_; }
  long exp() const { return exp_; }
  double to_double() const;
  std::string str() const;
  mpq_class to_mpq() const;
  bool is_zero() const { return num_ == 0; }
  int sign() const { return sgn(num_); }
  // 2-adic valuation; zero has valuation +inf, reported as a large number
  long valuation() const { return is_zero() ? (1L << 40) : exp_; }

  Dyadic operator-() const { return Dyadic(-num_, exp_); }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_); }
  Dyadic mul_pow2(long e) const { return is_zero() ? *this : Dyadic(num_, exp_ + e); }
  friend int cmp(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.num_ == b.num_; }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }

 private:
  mpz_class num_ = 0;
  long exp_ = 0;
  void normalize();
};

// Exact open interval with rational endpoints; PL fixed points need not be dyadic.
struct QInterval {
  mpq_class lo, hi;
  friend bool operator==(const QInterval& a, const QInterval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

// Orientation-preserving PL homeomorphism of the line, identity outside
// [x_0, x_n], with dyadic breakpoints and power-of-two slopes.
class PLMap {
 public:
  PLMap() = default;  // identity
  // points (x_j, y_j) with x_0 = y_0 and x_n = y_n
  explicit PLMap(std::vector<std::pair<Dyadic, Dyadic>> pts);
  static PLMap identity() { return PLMap(); }
  // affine x -> 2^e x + b restricted to [lo, hi] is not a homeo of the line; use conjugate().
  // Conjugate by the affine map A(x) = 2^e x + b: returns A f A^{-1}.
  PLMap conjugate_affine(long e, const Dyadic& b) const;

  const std::vector<std::pair<Dyadic, Dyadic>>& points() const { return pts_; }
  bool is_identity() const { return pts_.empty(); }

  Dyadic eval(const Dyadic& x) const;
  Dyadic inverse_eval(const Dyadic& y) const;
  double eval(double x) const;
  double inverse_eval(double y) const;
  mpq_class eval(const mpq_class& x) const;
  // right-hand slope at x
  Dyadic slope(const Dyadic& x) const;
  PLMap inverse() const;
  // (this o g)(x) = this(g(x))
  PLMap compose(const PLMap& g) const;
  PLMap power(long n) const;
  std::vector<QInterval> support() const;

  friend bool operator==(const PLMap& a, const PLMap& b) { return a.pts_ == b.pts_; }

 private:
  std::vector<std::pair<Dyadic, Dyadic>> pts_;
  void canonicalize();
};

PLMap operator*(const PLMap& f, const PLMap& g);  // composition f o g
PLMap commutator(const PLMap& f, const PLMap& g);  // f g f^-1 g^-1

// PL map of the line with power-of-two slopes sending [a,b] onto [c,d] and fixing
// everything outside [lo, hi] (lo < a, c and b, d < hi); all points dyadic.
PLMap pl_interval_map(const Dyadic& lo, const Dyadic& a, const Dyadic& b, const Dyadic& hi, const Dyadic& c,
                      const Dyadic& d);

}  // namespace crg
