#include "critreg/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crg {

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  mp_bitcnt_t tz = mpz_scan1(num_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), tz);
    exp_ += static_cast<long>(tz);
  }
}

Dyadic Dyadic::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("Dyadic::from_double: non-finite value");
  if (x == 0.0) return Dyadic();
  int e = 0;
  double m = std::frexp(x, &e);  // x = m 2^e, 0.5 <= |m| < 1
  // 53-bit mantissa as integer
  double mi = std::ldexp(m, 53);
  mpz_class num;
  mpz_set_d(num.get_mpz_t(), mi);
  return Dyadic(num, e - 53);
}

Dyadic Dyadic::parse(const std::string& s) {
  auto slash = s.find('/');
  mpz_class n;
  if (n.set_str(s.substr(0, slash), 10) != 0) throw std::invalid_argument("bad dyadic: " + s);
  if (slash == std::string::npos) return Dyadic(n, 0);
  mpz_class d;
  if (d.set_str(s.substr(slash + 1), 10) != 0 || d <= 0) throw std::invalid_argument("bad dyadic: " + s);
  mp_bitcnt_t tz = mpz_scan1(d.get_mpz_t(), 0);
  mpz_class p2;
  mpz_ui_pow_ui(p2.get_mpz_t(), 2, tz);
  if (p2 != d) throw std::invalid_argument("denominator is not a power of two: " + s);
  return Dyadic(n, -static_cast<long>(tz));
}

double Dyadic::to_double() const {
  if (num_ == 0) return 0.0;
  mpz_class a = abs(num_);
  long bits = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2));
  long e = exp_;
  if (bits > 53) {
    long shift = bits - 53;
    mpz_class q, r, half;
    mpz_fdiv_q_2exp(q.get_mpz_t(), a.get_mpz_t(), shift);
    mpz_fdiv_r_2exp(r.get_mpz_t(), a.get_mpz_t(), shift);
    mpz_ui_pow_ui(half.get_mpz_t(), 2, shift - 1);
    if (r > half || (r == half && mpz_odd_p(q.get_mpz_t()))) q += 1;
    a = q;
    e += shift;
  }
  double v = std::ldexp(a.get_d(), static_cast<int>(std::clamp(e, -100000L, 100000L)));
  return num_ < 0 ? -v : v;
}

mpq_class Dyadic::to_mpq() const {
  mpq_class q(num_);
  if (exp_ >= 0) mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), exp_);
  else mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), -exp_);
  return q;
}

std::string Dyadic::str() const {
  if (exp_ >= 0) {
    mpz_class v = num_;
    mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), exp_);
    return v.get_str();
  }
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, -exp_);
  return num_.get_str() + "/" + d.get_str();
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  long e = std::min(a.exp_, b.exp_);
  mpz_class x = a.num_, y = b.num_;
  mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), a.exp_ - e);
  mpz_mul_2exp(y.get_mpz_t(), y.get_mpz_t(), b.exp_ - e);
  return Dyadic(x + y, e);
}

int cmp(const Dyadic& a, const Dyadic& b) {
  Dyadic d = a - b;
  return d.sign();
}

// ---------------------------------------------------------------- PLMap

namespace {


// slope (y1-y0)/(x1-x0) when it is a power of two, else throws
Dyadic pow2_slope(const Dyadic& x0, const Dyadic& y0, const Dyadic& x1, const Dyadic& y1) {
  Dyadic dx = x1 - x0, dy = y1 - y0;
  if (dx.sign() <= 0 || dy.sign() <= 0) throw std::invalid_argument("PL map must be strictly increasing");
  if (dx.num() != dy.num()) throw std::invalid_argument("PL slope is not a power of two");
  return Dyadic(1, dy.exp() - dx.exp());
}

}  // namespace

PLMap::PLMap(std::vector<std::pair<Dyadic, Dyadic>> pts) : pts_(std::move(pts)) {
  if (pts_.size() == 1) throw std::invalid_argument("PL map needs at least two breakpoints");
  if (!pts_.empty()) {
    if (pts_.front().first != pts_.front().second || pts_.back().first != pts_.back().second)
      throw std::invalid_argument("PL map must fix its extreme breakpoints");
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
      pow2_slope(pts_[i].first, pts_[i].second, pts_[i + 1].first, pts_[i + 1].second);
  }
  canonicalize();
}

void PLMap::canonicalize() {
  if (pts_.empty()) return;
  // drop interior breakpoints where the slope does not change
  std::vector<std::pair<Dyadic, Dyadic>> out;
  out.push_back(pts_.front());
  for (std::size_t i = 1; i + 1 < pts_.size(); ++i) {
    auto& p = out.back();
    Dyadic s1 = pow2_slope(p.first, p.second, pts_[i].first, pts_[i].second);
    Dyadic s2 = pow2_slope(pts_[i].first, pts_[i].second, pts_[i + 1].first, pts_[i + 1].second);
    if (s1 != s2) out.push_back(pts_[i]);
  }
  out.push_back(pts_.back());
  // trim identity pieces at the ends
  while (out.size() >= 2 && out[1].first == out[1].second) out.erase(out.begin());
  while (out.size() >= 2 && out[out.size() - 2].first == out[out.size() - 2].second) out.pop_back();
  if (out.size() < 2) out.clear();
  pts_ = std::move(out);
}

Dyadic PLMap::eval(const Dyadic& x) const {
  if (pts_.empty() || x <= pts_.front().first || x >= pts_.back().first) return x;
  auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                             [](const Dyadic& v, const std::pair<Dyadic, Dyadic>& p) { return v < p.first; });
  auto& hi = *it;
  auto& lo = *(it - 1);
  Dyadic s = pow2_slope(lo.first, lo.second, hi.first, hi.second);
  return lo.second + (x - lo.first).mul_pow2(s.exp());
}

Dyadic PLMap::inverse_eval(const Dyadic& y) const {
  if (pts_.empty() || y <= pts_.front().second || y >= pts_.back().second) return y;
  auto it = std::upper_bound(pts_.begin(), pts_.end(), y,
                             [](const Dyadic& v, const std::pair<Dyadic, Dyadic>& p) { return v < p.second; });
  auto& hi = *it;
  auto& lo = *(it - 1);
  Dyadic s = pow2_slope(lo.first, lo.second, hi.first, hi.second);
  return lo.first + (y - lo.second).mul_pow2(-s.exp());
}

double PLMap::eval(double x) const {
  if (pts_.empty()) return x;
  return eval(Dyadic::from_double(x)).to_double();
}

double PLMap::inverse_eval(double y) const {
  if (pts_.empty()) return y;
  return inverse_eval(Dyadic::from_double(y)).to_double();
}

Dyadic PLMap::slope(const Dyadic& x) const {
  if (pts_.empty() || x < pts_.front().first || x >= pts_.back().first) return Dyadic(1);
  auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                             [](const Dyadic& v, const std::pair<Dyadic, Dyadic>& p) { return v < p.first; });
  return pow2_slope((it - 1)->first, (it - 1)->second, it->first, it->second);
}

PLMap PLMap::inverse() const {
  PLMap r;
  for (auto& [x, y] : pts_) r.pts_.emplace_back(y, x);
  return r;
}

PLMap PLMap::compose(const PLMap& g) const {
  if (pts_.empty()) return g;
  if (g.pts_.empty()) return *this;
  // candidate breakpoints: g's breakpoints and g^{-1} of ours
  std::vector<Dyadic> xs;
  for (auto& p : g.pts_) xs.push_back(p.first);
  for (auto& p : pts_) xs.push_back(g.inverse_eval(p.first));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<Dyadic, Dyadic>> pts;
  for (auto& x : xs) pts.emplace_back(x, eval(g.eval(x)));
  PLMap r;
  r.pts_ = std::move(pts);
  // extreme points are fixed by both maps
  r.canonicalize();
  return r;
}

PLMap PLMap::power(long n) const {
  PLMap base = n < 0 ? inverse() : *this;
  long m = n < 0 ? -n : n;
  PLMap acc;
  while (m > 0) {
    if (m & 1) acc = acc.compose(base);
    base = base.compose(base);
    m >>= 1;
  }
  return acc;
}

PLMap PLMap::conjugate_affine(long e, const Dyadic& b) const {
  PLMap r;
  for (auto& [x, y] : pts_) r.pts_.emplace_back(x.mul_pow2(e) + b, y.mul_pow2(e) + b);
  return r;
}

mpq_class PLMap::eval(const mpq_class& x) const {
  if (pts_.empty() || x <= pts_.front().first.to_mpq() || x >= pts_.back().first.to_mpq()) return x;
  std::size_t i = 0;
  while (pts_[i + 1].first.to_mpq() <= x) ++i;
  const auto& [x0, y0] = pts_[i];
  const auto& [x1, y1] = pts_[i + 1];
  Dyadic s = pow2_slope(x0, y0, x1, y1);
  return y0.to_mpq() + (x - x0.to_mpq()) * s.to_mpq();
}

std::vector<QInterval> PLMap::support() const {
  std::vector<QInterval> out;
  if (pts_.empty()) return out;
  // f(x) - x is affine on each piece, so its zero set per piece is the piece, a point, or empty
  std::vector<mpq_class> cuts;
  cuts.push_back(pts_.front().first.to_mpq());
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    const auto& [x0, y0] = pts_[i];
    const auto& [x1, y1] = pts_[i + 1];
    Dyadic d0 = y0 - x0, d1 = y1 - x1;
    if (d0.is_zero()) cuts.push_back(x0.to_mpq());
    if (d1.is_zero()) cuts.push_back(x1.to_mpq());
    if (d0.sign() * d1.sign() < 0) {
      // y0 + s (x - x0) = x
      mpq_class s = pow2_slope(x0, y0, x1, y1).to_mpq();
      cuts.push_back((y0.to_mpq() - s * x0.to_mpq()) / (1 - s));
    }
  }
  cuts.push_back(pts_.back().first.to_mpq());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    mpq_class mid = (cuts[i] + cuts[i + 1]) / 2;
    if (eval(mid) != mid) out.push_back({cuts[i], cuts[i + 1]});
  }
  return out;
}

PLMap operator*(const PLMap& f, const PLMap& g) { return f.compose(g); }

PLMap commutator(const PLMap& f, const PLMap& g) { return f * g * f.inverse() * g.inverse(); }

namespace {

// Greedy minimal decomposition of [p,q] into standard dyadic intervals.
std::vector<std::pair<Dyadic, Dyadic>> dyadic_pieces(const Dyadic& p, const Dyadic& q) {
  std::vector<std::pair<Dyadic, Dyadic>> out;
  Dyadic x = p;
  while (x < q) {
    // largest 2^e with x a multiple of 2^e and x + 2^e <= q
    long e = x.is_zero() ? 64 : x.exp();
    Dyadic len = q - x;
    // floor(log2(len))
    long lg = static_cast<long>(mpz_sizeinbase(len.num().get_mpz_t(), 2)) - 1 + len.exp();
    e = std::min(e, lg);
    Dyadic step = Dyadic::pow2(e);
    while (x + step > q) step = step.mul_pow2(-1);
    out.emplace_back(x, x + step);
    x = x + step;
  }
  return out;
}

void split_to(std::vector<std::pair<Dyadic, Dyadic>>& v, std::size_t n) {
  while (v.size() < n) {
    // split the first piece in halves
    auto [a, b] = v.front();
    Dyadic m = (a + b).mul_pow2(-1);
    v.erase(v.begin());
    v.insert(v.begin(), {m, b});
    v.insert(v.begin(), {a, m});
  }
}

void append_map(std::vector<std::pair<Dyadic, Dyadic>>& pts, const Dyadic& p, const Dyadic& q, const Dyadic& r,
                const Dyadic& s) {
  auto A = dyadic_pieces(p, q), B = dyadic_pieces(r, s);
  std::size_t n = std::max(A.size(), B.size());
  split_to(A, n);
  split_to(B, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pts.empty() || pts.back().first != A[i].first) pts.emplace_back(A[i].first, B[i].first);
    pts.emplace_back(A[i].second, B[i].second);
  }
}

}  // namespace

PLMap pl_interval_map(const Dyadic& lo, const Dyadic& a, const Dyadic& b, const Dyadic& hi, const Dyadic& c,
                      const Dyadic& d) {
  if (!(lo < a && a < b && b < hi && lo < c && c < d && d < hi))
    throw std::invalid_argument("pl_interval_map: bad interval order");
  std::vector<std::pair<Dyadic, Dyadic>> pts;
  append_map(pts, lo, a, lo, c);
  append_map(pts, a, b, c, d);
  append_map(pts, b, hi, d, hi);
  return PLMap(std::move(pts));
}

}  // namespace crg
