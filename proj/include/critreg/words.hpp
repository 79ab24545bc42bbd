#pragma once
#include <array>
#include <string>
#include <vector>

#include "critreg/dyadic.hpp"

// Words over {a,b,c,d,e} in G = (Z x BS(1,2)) * F2, where Z = <c>, BS(1,2) = <a,e | a e a^-1 = e^2>
// and F2 = <b,d>. A word acts on points right to left: (v1 v2 ... vn) x = v1(v2(...(vn x))).
namespace crg {

struct Letter {
  char gen = 'a';
  long exp = 1;
  friend bool operator==(const Letter& x, const Letter& y) { return x.gen == y.gen && x.exp == y.exp; }
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);
  // "a^3 b^-1 c d e^2"; whitespace optional between letters
  static Word parse(const std::string& s);
  static Word gen(char g, long exp = 1) { return Word({{g, exp}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  // total number of letters with multiplicity, |exp| summed
  long letter_count() const;
  std::string str() const;

  Word inverse() const;
  Word power(long n) const;
  friend Word operator*(const Word& x, const Word& y);
  friend bool operator==(const Word& x, const Word& y) { return x.letters_ == y.letters_; }

 private:
  std::vector<Letter> letters_;  // merged: no zero exponents, no equal neighbours
};

Word commutator(const Word& x, const Word& y);  // x y x^-1 y^-1
Word conjugate(const Word& x, const Word& y);   // x^y = y^-1 x y

// BS(1,2) element z -> 2^m z + q
struct BSElement {
  long m = 0;
  Dyadic q;
  bool is_identity() const { return m == 0 && q.is_zero(); }
  friend bool operator==(const BSElement& x, const BSElement& y) { return x.m == y.m && x.q == y.q; }
};
BSElement operator*(const BSElement& x, const BSElement& y);  // x o y

struct Syllable {
  bool in_a = true;
  // A factor: c^cexp times the BS element
  long cexp = 0;
  BSElement bs;
  // F factor: freely reduced letters over {b,d}
  std::vector<Letter> free;
  friend bool operator==(const Syllable& x, const Syllable& y);
};

struct NormalForm {
  std::vector<Syllable> syllables;
  bool is_identity() const { return syllables.empty(); }
  std::string str() const;
  // a word representing the same element
  Word to_word() const;
  friend bool operator==(const NormalForm& x, const NormalForm& y) { return x.syllables == y.syllables; }
};

NormalForm normalize(const Word& w);
bool is_identity(const Word& w);
bool equal_in_group(const Word& x, const Word& y);
// minimal number of generator powers v^n expressing w
long syllable_length(const Word& w);
// minimal syllable length of an element c^cexp (m, q) of Z x BS(1,2)
long a_syllable_length(long cexp, const BSElement& g);
// word for (m, q) of the form a^v e^o a^(m-v)
Word bs_word(const BSElement& g);

Word build_u_dagger();
// w_0 = 1, w_i = v_i^{N_i} w_{i-1}, v_{2i-1} = b, v_{2i} = a; N[i-1] is N_i
std::vector<Word> build_w_sequence(std::size_t i_max, const std::vector<long>& N);
char ladder_generator(std::size_t i);
// exponent sums of (a, b, c, d)
std::array<long, 4> abelianization(const Word& w);

}  // namespace crg
