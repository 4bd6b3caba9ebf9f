#pragma once

// Exact rational scalar used by every polynomial and certificate type.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ratsos {

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int value) : q_(value) {}
  Rational(long value) : q_(value) {}
  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(mpz_class(num), mpz_class(den));
    q_.canonicalize();
  }
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(const mpz_class& integer) : q_(integer) {}
  explicit Rational(mpq_class value) : q_(std::move(value)) { q_.canonicalize(); }

  /// Parses "n" or "n/d" with optional leading sign; no whitespace, no decimals.
  static Rational parse(std::string_view text) {
    auto is_integer = [](std::string_view s) {
      if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    auto to_mpz = [](std::string_view s) {
      if (!s.empty() && s.front() == '+') s.remove_prefix(1);
      return mpz_class(std::string(s), 10);
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      if (!is_integer(text))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
      return Rational(to_mpz(text));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den) || den.front() == '-' || den.front() == '+')
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    return Rational(to_mpz(num), to_mpz(den));
  }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& gmp() const { return q_; }
  mpq_class& gmp() { return q_; }
  double to_double() const { return q_.get_d(); }

  /// "n" for integers, "n/d" otherwise.
  std::string str() const { return q_.get_str(); }
  /// Always "n/d", the lossless wire form.
  std::string fraction_str() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rational operator-() const { return Rational(raw{}, -q_); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  struct raw {};
  Rational(raw, mpq_class value) : q_(std::move(value)) {}

  mpq_class q_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Integer power with a nonnegative exponent.
inline Rational pow(const Rational& base, std::size_t exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

}  // namespace ratsos

template <>
struct std::hash<ratsos::Rational> {
  std::size_t operator()(const ratsos::Rational& r) const {
    return std::hash<std::string>{}(r.str());
  }
};
