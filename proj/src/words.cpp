#include "critreg/words.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace crg {

namespace {

bool valid_gen(char g) { return g >= 'a' && g <= 'e'; }
bool in_a_factor(char g) { return g == 'a' || g == 'c' || g == 'e'; }

void push_letter(std::vector<Letter>& out, Letter l) {
  if (l.exp == 0) return;
  if (!out.empty() && out.back().gen == l.gen) {
    out.back().exp += l.exp;
    if (out.back().exp == 0) out.pop_back();
    return;
  }
  out.push_back(l);
}

}  // namespace

Word::Word(std::vector<Letter> letters) {
  for (auto& l : letters) {
    if (!valid_gen(l.gen)) throw std::invalid_argument(std::string("unknown generator '") + l.gen + "'");
    push_letter(letters_, l);
  }
}

Word Word::parse(const std::string& s) {
  std::vector<Letter> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '*' || ch == '.') {
      ++i;
      continue;
    }
    if (ch == '1' && out.empty() && s.find_first_not_of(" 1") == std::string::npos) break;
    if (!valid_gen(ch)) throw std::invalid_argument("bad word syntax near '" + s.substr(i) + "'");
    ++i;
    long e = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      std::size_t j = i;
      if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      std::string num = s.substr(i, j - i);
      if (num.empty() || num == "-" || num == "+") throw std::invalid_argument("bad exponent in word");
      e = std::stol(num);
      i = j;
    }
    out.push_back({ch, e});
  }
  return Word(std::move(out));
}

long Word::letter_count() const {
  long n = 0;
  for (auto& l : letters_) n += l.exp < 0 ? -l.exp : l.exp;
  return n;
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) os << ' ';
    os << letters_[i].gen;
    if (letters_[i].exp != 1) os << '^' << letters_[i].exp;
  }
  return os.str();
}

Word Word::inverse() const {
  std::vector<Letter> r;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.push_back({it->gen, -it->exp});
  return Word(std::move(r));
}

Word Word::power(long n) const {
  Word base = n < 0 ? inverse() : *this;
  if (n < 0) n = -n;
  Word r;
  for (long i = 0; i < n; ++i) r = r * base;
  return r;
}

Word operator*(const Word& x, const Word& y) {
  Word r = x;
  for (auto& l : y.letters_) push_letter(r.letters_, l);
  return r;
}

Word commutator(const Word& x, const Word& y) { return x * y * x.inverse() * y.inverse(); }
Word conjugate(const Word& x, const Word& y) { return y.inverse() * x * y; }

BSElement operator*(const BSElement& x, const BSElement& y) {
  return {x.m + y.m, y.q.mul_pow2(x.m) + x.q};
}

bool operator==(const Syllable& x, const Syllable& y) {
  if (x.in_a != y.in_a) return false;
  if (x.in_a) return x.cexp == y.cexp && x.bs == y.bs;
  return x.free == y.free;
}

NormalForm normalize(const Word& w) {
  NormalForm nf;
  auto& st = nf.syllables;
  for (auto& l : w.letters()) {
    if (in_a_factor(l.gen)) {
      Syllable s;
      if (l.gen == 'c') s.cexp = l.exp;
      else if (l.gen == 'a') s.bs.m = l.exp;
      else s.bs.q = Dyadic(l.exp);
      if (!st.empty() && st.back().in_a) {
        auto& t = st.back();
        t.cexp += s.cexp;
        t.bs = t.bs * s.bs;
        if (t.cexp == 0 && t.bs.is_identity()) st.pop_back();
      } else {
        st.push_back(s);
      }
    } else {
      if (st.empty() || st.back().in_a) {
        Syllable s;
        s.in_a = false;
        st.push_back(s);
      }
      push_letter(st.back().free, l);
      if (st.back().free.empty()) st.pop_back();
    }
  }
  return nf;
}

bool is_identity(const Word& w) { return normalize(w).is_identity(); }
bool equal_in_group(const Word& x, const Word& y) { return normalize(x) == normalize(y); }

Word bs_word(const BSElement& g) {
  if (g.q.is_zero()) return Word::gen('a', g.m);
  long v = g.q.exp();
  long o = g.q.num().get_si();
  if (g.q.num() != o) throw std::overflow_error("bs_word: translation part too large");
  return Word({{'a', v}, {'e', o}, {'a', g.m - v}});
}

long a_syllable_length(long cexp, const BSElement& g) {
  long n = cexp != 0 ? 1 : 0;
  if (g.q.is_zero()) return n + (g.m != 0 ? 1 : 0);
  long v = g.q.valuation();
  if (v >= 0) return n + 1 + (g.m != 0 ? 1 : 0);
  return n + 2 + (g.m > v ? 1 : 0);
}

long syllable_length(const Word& w) {
  long n = 0;
  for (auto& s : normalize(w).syllables) {
    if (s.in_a) n += a_syllable_length(s.cexp, s.bs);
    else n += static_cast<long>(s.free.size());
  }
  return n;
}

Word NormalForm::to_word() const {
  Word r;
  for (auto& s : syllables) {
    if (s.in_a) r = r * Word::gen('c', s.cexp) * bs_word(s.bs);
    else r = r * Word(s.free);
  }
  return r;
}

std::string NormalForm::str() const {
  if (syllables.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < syllables.size(); ++i) {
    auto& s = syllables[i];
    if (i) os << " * ";
    if (s.in_a) os << "[c^" << s.cexp << "; z->2^" << s.bs.m << " z + " << s.bs.q.str() << "]";
    else os << Word(s.free).str();
  }
  return os.str();
}

Word build_u_dagger() {
  Word c = Word::gen('c'), d = Word::gen('d'), e = Word::gen('e');
  Word x = conjugate(c, d);
  Word y = e * conjugate(e, d) * e.inverse();
  return commutator(commutator(x, y), c);
}

char ladder_generator(std::size_t i) { return i % 2 == 1 ? 'b' : 'a'; }

std::vector<Word> build_w_sequence(std::size_t i_max, const std::vector<long>& N) {
  if (N.size() < i_max) throw std::invalid_argument("build_w_sequence: not enough exponents");
  std::vector<Word> ws{Word()};
  for (std::size_t i = 1; i <= i_max; ++i) {
    if (N[i - 1] <= 0) throw std::invalid_argument("build_w_sequence: exponents must be positive");
    ws.push_back(Word::gen(ladder_generator(i), N[i - 1]) * ws.back());
  }
  return ws;
}

std::array<long, 4> abelianization(const Word& w) {
  std::array<long, 4> v{0, 0, 0, 0};
  for (auto& l : w.letters())
    if (l.gen != 'e') v[l.gen - 'a'] += l.exp;
  return v;
}

}  // namespace crg
