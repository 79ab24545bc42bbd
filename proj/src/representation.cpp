#include "critreg/representation.hpp"

#include <cmath>
#include <stdexcept>

namespace crg {

std::size_t Representation::index(char g) {
  if (g < 'a' || g > 'e') throw std::invalid_argument(std::string("unknown generator '") + g + "'");
  return static_cast<std::size_t>(g - 'a');
}

Representation::Representation() : ambient_{-kInf, kInf} {}

Representation::Representation(std::array<MapObject, 5> gens, Interval ambient, std::string name)
    : gens_(std::move(gens)), ambient_(ambient), name_(std::move(name)) {
  for (std::size_t i = 0; i < 5; ++i) inv_[i] = gens_[i].inverse();
}

double Representation::act_power(char g, long n, double x) const {
  if (n >= 0) return gen(g).iterate(x, n);
  return gen_inverse(g).iterate(x, -n);
}

double Representation::act(const Word& w, double x) const {
  auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) x = act_power(it->gen, it->exp, x);
  return x;
}

MapObject Representation::map_of(const Word& w) const {
  std::vector<MapObject> fs;
  for (auto& l : w.letters()) fs.push_back(power(gen(l.gen), l.exp));
  return compose(fs);
}

json Representation::to_json() const {
  json g = json::object();
  for (char c = 'a'; c <= 'e'; ++c) g[std::string(1, c)] = gen(c).to_json();
  json amb = json::array();
  amb.push_back(std::isfinite(ambient_.lo) ? json(ambient_.lo) : json("-inf"));
  amb.push_back(std::isfinite(ambient_.hi) ? json(ambient_.hi) : json("inf"));
  return json{{"name", name_}, {"ambient", amb}, {"generators", g}};
}

double relator_residual(const Representation& r, const Word& w1, const Word& w2, const std::vector<double>& grid) {
  double m = 0.0;
  for (double x : grid) m = std::max(m, std::fabs(r.act(w1, x) - r.act(w2, x)));
  return m;
}

}  // namespace crg
