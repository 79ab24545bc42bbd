#pragma once
#include <array>
#include <string>

#include "critreg/homeo.hpp"
#include "critreg/words.hpp"

namespace crg {

// Assignment of the generators a..e to maps of an ambient interval.
class Representation {
 public:
  Representation();
  Representation(std::array<MapObject, 5> gens, Interval ambient, std::string name = "");

  const MapObject& gen(char g) const { return gens_.at(index(g)); }
  const MapObject& gen_inverse(char g) const { return inv_.at(index(g)); }
  Interval ambient() const { return ambient_; }
  const std::string& name() const { return name_; }

  // v^n x for a single generator
  double act_power(char g, long n, double x) const;
  // w x, letters applied right to left
  double act(const Word& w, double x) const;
  // the map of w as a DAG
  MapObject map_of(const Word& w) const;
  json to_json() const;

 private:
  std::array<MapObject, 5> gens_;
  std::array<MapObject, 5> inv_;
  Interval ambient_;
  std::string name_;
  static std::size_t index(char g);
};

// sup over the grid of |w1 x - w2 x|
double relator_residual(const Representation& r, const Word& w1, const Word& w2, const std::vector<double>& grid);

}  // namespace crg
