#pragma once
#include <stdexcept>
#include <vector>

#include "critreg/representation.hpp"

namespace crg {

struct CoverInterval {
  Interval iv;
  char gen = 'a';
  int index = 0;  // component index within supp of the generator
};

// Open cover by the support components of the generators. Queries reaching outside
// the horizon interval only give lower bounds.
class Cover {
 public:
  Cover() = default;
  explicit Cover(std::vector<CoverInterval> items, Interval horizon = {-kInf, kInf});
  static Cover from_representation(const Representation& r, Interval horizon = {-kInf, kInf});

  const std::vector<CoverInterval>& items() const { return items_; }
  Interval horizon() const { return horizon_; }
  // index of the item containing p with the largest sup, or -1
  int best_at(double p) const;

 private:
  std::vector<CoverInterval> items_;  // sorted by lo
  Interval horizon_;
};

struct CoverResult {
  long value = 0;
  bool infinite = false;
  bool lower_bound = false;  // horizon reached; value is a lower bound
  std::string str() const;
};

class NoCoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// cl(A) for a union of closed segments
CoverResult covering_length(const Cover& c, const IntervalSet& segments);
CoverResult covering_length(const Cover& c, double x, double y);
CoverResult covering_distance(const Cover& c, double x, double y);

struct ChainWitness {
  std::vector<CoverInterval> chain;
  double x = 0.0, y = 0.0;
  json to_json() const;
};
ChainWitness minimal_chain(const Cover& c, double x, double y);
// true when consecutive members overlap properly and members two apart are disjoint
bool is_chain(const std::vector<Interval>& ivs);

// g = v_N^{n_N} ... v_1^{n_1} with g x > y, following the chain
Word slide(const Representation& r, const ChainWitness& w, long budget = 10000000);

}  // namespace crg
