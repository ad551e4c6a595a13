#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace ehrkit {

// Library errors carry a stable machine-readable code alongside the message.
// The CLI maps codes onto exit statuses; tests match on them.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void raise(const std::string& code, const std::string& message) {
  throw Error(code, message);
}

using Int = mpz_class;

inline long long to_ll(const Int& v) {
  if (!v.fits_slong_p()) raise("Overflow", "integer does not fit a machine word");
  return v.get_si();
}

/**
 * Arbitrary-precision rational, always kept in lowest terms with a positive
 * denominator. Thin wrapper over mpq_class so the rest of the library can
 * use exact arithmetic without touching GMP types directly.
 *
 * Text form is "p" or "p/q" with q > 0 after canonicalization; parsing
 * rejects a zero denominator and reports the byte offset of bad input.
 */
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}              // NOLINT: implicit by design
  Rat(int n) : v_(n) {}               // NOLINT
  explicit Rat(const Int& n) : v_(n) {}
  Rat(const Int& num, const Int& den);
  Rat(long num, long den);
  explicit Rat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

  // Parses "p" or "p/q" (optional leading '-'). Throws Error("ParseError")
  // with the offending position for malformed text or q == 0.
  static Rat parse(const std::string& text);

  Int num() const { return Int(v_.get_num()); }
  Int den() const { return Int(v_.get_den()); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Int floor() const;
  Int ceil() const;
  Rat abs() const { return Rat(mpq_class(::abs(v_))); }

  std::string str() const;
  double approx() const { return v_.get_d(); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r);

 private:
  mpq_class v_;
};

Rat rat_pow(const Rat& base, long exp);
Rat rat_min(const Rat& a, const Rat& b);
Rat rat_max(const Rat& a, const Rat& b);

}  // namespace ehrkit
