#pragma once

// Dense univariate polynomials over the rationals.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ratsos/rational.hpp"

namespace ratsos {

class UniPoly {
 public:
  UniPoly() = default;
  /// Coefficients indexed by exponent, lowest first.
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  UniPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }
  UniPoly(const Rational& constant) {
    if (!constant.is_zero()) c_.push_back(constant);
  }
  UniPoly(int constant) : UniPoly(Rational(constant)) {}

  static UniPoly monomial(const Rational& coeff, std::size_t exponent) {
    if (coeff.is_zero()) return {};
    std::vector<Rational> c(exponent + 1);
    c[exponent] = coeff;
    return UniPoly(std::move(c));
  }
  static UniPoly x() { return monomial(Rational(1), 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t e) const { return e < c_.size() ? c_[e] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
  std::size_t term_count() const {
    return static_cast<std::size_t>(
        std::count_if(c_.begin(), c_.end(), [](const Rational& r) { return !r.is_zero(); }));
  }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return UniPoly(std::move(d));
  }

  UniPoly monic() const {
    if (is_zero()) return {};
    return *this * (Rational(1) / leading());
  }

  UniPoly operator-() const {
    UniPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  UniPoly& operator+=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  UniPoly& operator-=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  UniPoly& operator*=(const Rational& s) {
    if (s.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, const Rational& s) { return a *= s; }
  friend UniPoly operator*(const Rational& s, UniPoly a) { return a *= s; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (!b.c_[j].is_zero()) r[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return UniPoly(std::move(r));
  }
  UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  /// Human-readable form, highest power first, e.g. "x^3-x^2+1/2*x-1".
  std::string str(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      const Rational& v = c_[k];
      if (v.is_zero()) continue;
      const Rational mag = abs(v);
      if (v.sign() < 0)
        out += "-";
      else if (!out.empty())
        out += "+";
      std::string mono;
      if (k == 1)
        mono = var;
      else if (k > 1)
        mono = var + "^" + std::to_string(k);
      if (mono.empty())
        out += mag.str();
      else if (mag == Rational(1))
        out += mono;
      else
        out += mag.str() + "*" + mono;
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const UniPoly& p) { return os << p.str(); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<Rational> c_;
};

inline UniPoly pow(const UniPoly& base, std::size_t exponent) {
  UniPoly result(1);
  UniPoly b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

/// Euclidean division: a == b*quotient + remainder, deg remainder < deg b.
inline std::pair<UniPoly, UniPoly> div_rem(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw std::domain_error("zero divisor");
  if (a.degree() < b.degree()) return {UniPoly(), a};
  std::vector<Rational> rem = a.coeffs();
  const int db = b.degree();
  const Rational inv_lead = Rational(1) / b.leading();
  std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - db + 1));
  for (int k = a.degree(); k >= db; --k) {
    const Rational f = rem[static_cast<std::size_t>(k)] * inv_lead;
    if (f.is_zero()) continue;
    quo[static_cast<std::size_t>(k - db)] = f;
    for (int i = 0; i <= db; ++i) {
      const auto& bc = b.coeffs()[static_cast<std::size_t>(i)];
      if (!bc.is_zero()) rem[static_cast<std::size_t>(k - db + i)] -= f * bc;
    }
  }
  rem.resize(static_cast<std::size_t>(db));
  return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

inline UniPoly rem(const UniPoly& a, const UniPoly& b) { return div_rem(a, b).second; }

/// Rational content: positive number c such that p/c has coprime integer coefficients.
inline Rational content(const UniPoly& p) {
  if (p.is_zero()) return Rational(0);
  mpz_class num_gcd = 0;
  mpz_class den_lcm = 1;
  for (const auto& v : p.coeffs()) {
    if (v.is_zero()) continue;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.numerator().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.denominator().get_mpz_t());
  }
  return Rational(num_gcd, den_lcm);
}

/// p divided by its content, sign preserved.
inline UniPoly primitive_part(const UniPoly& p) {
  if (p.is_zero()) return {};
  return p * (Rational(1) / content(p));
}

/// Monic greatest common divisor.
inline UniPoly gcd(UniPoly a, UniPoly b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd of two zero polynomials");
  while (!b.is_zero()) {
    UniPoly r = rem(a, b);
    a = std::move(b);
    b = primitive_part(r);
  }
  return a.monic();
}

/// Exact division; throws if b does not divide a.
inline UniPoly exact_div(const UniPoly& a, const UniPoly& b) {
  auto [q, r] = div_rem(a, b);
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return q;
}

/// Resultant via the Euclidean algorithm over a field.
inline Rational resultant(UniPoly a, UniPoly b) {
  if (a.is_zero() || b.is_zero()) return Rational(0);
  Rational acc(1);
  while (true) {
    const int da = a.degree();
    const int db = b.degree();
    if (db == 0) return acc * pow(b.leading(), static_cast<std::size_t>(da));
    if (da < db) {
      if ((da * db) % 2 == 1) acc = -acc;
      std::swap(a, b);
      continue;
    }
    UniPoly r = rem(a, b);
    if (r.is_zero()) return Rational(0);
    // res(a,b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
    if ((da * db) % 2 == 1) acc = -acc;
    acc *= pow(b.leading(), static_cast<std::size_t>(da - r.degree()));
    a = std::move(b);
    b = std::move(r);
  }
}

}  // namespace ratsos
