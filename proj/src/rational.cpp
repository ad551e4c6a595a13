#include "ehrkit/rational.hpp"

#include <cctype>
#include <ostream>

namespace ehrkit {

Rat::Rat(const Int& num, const Int& den) {
  if (den == 0) raise("ParseError", "zero denominator");
  v_ = mpq_class(num) / mpq_class(den);
}

Rat::Rat(long num, long den) : Rat(Int(num), Int(den)) {}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) raise("DivisionByZero", "rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rat Rat::parse(const std::string& text) {
  auto bad = [&](size_t pos, const std::string& why) -> Rat {
    raise("ParseError", "bad rational '" + text + "' at offset " +
                            std::to_string(pos) + ": " + why);
  };
  size_t i = 0;
  auto read_int = [&](const char* what) -> Int {
    size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++digits;
    }
    if (digits == 0) bad(start, std::string("expected ") + what);
    return Int(text.substr(start, i - start));
  };
  if (text.empty()) bad(0, "empty string");
  Int num = read_int("numerator");
  Int den = 1;
  if (i < text.size()) {
    if (text[i] != '/') bad(i, "expected '/'");
    ++i;
    den = read_int("denominator");
    if (den == 0) bad(i, "zero denominator");
    if (den < 0) bad(i, "negative denominator");
  }
  if (i != text.size()) bad(i, "trailing characters");
  return Rat(num, den);
}

Int Rat::floor() const {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

Int Rat::ceil() const {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

std::string Rat::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat rat_pow(const Rat& base, long exp) {
  if (exp < 0) return Rat(1) / rat_pow(base, -exp);
  Rat acc(1);
  Rat b = base;
  long e = exp;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

Rat rat_min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
Rat rat_max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

}  // namespace ehrkit
