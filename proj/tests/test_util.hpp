#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ratsos/ratsos.hpp"

namespace ratsos::testing {

inline UniPoly U(const std::string& s) { return parse_unipoly(s); }
inline Rational Q(const std::string& s) { return Rational::parse(s); }

inline MultiPoly M(const std::string& s, const std::string& vars) {
  return parse_poly(s, parse_variable_list(vars));
}

/// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(long max_num = 9, long max_den = 6) {
    return Rational(integer(-max_num, max_num), integer(1, max_den));
  }
  Rational positive(long max_num = 9, long max_den = 6) {
    return Rational(integer(1, max_num), integer(1, max_den));
  }

  UniPoly poly(int degree) {
    std::vector<Rational> c;
    for (int i = 0; i <= degree; ++i) c.push_back(rational());
    if (c.back().is_zero()) c.back() = Rational(1);
    return UniPoly(std::move(c));
  }

  UniPoly monic(int degree) {
    UniPoly p = poly(degree);
    return p * (Rational(1) / p.leading());
  }

  std::vector<std::vector<Rational>> matrix(std::size_t n) {
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (auto& row : m)
      for (auto& v : row) v = rational(4, 3);
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace ratsos::testing
