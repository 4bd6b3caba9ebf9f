#pragma once

// Sparse multivariate polynomials over the rationals, graded-lex ordered.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ratsos/rational.hpp"
#include "ratsos/support.hpp"
#include "ratsos/unipoly.hpp"

namespace ratsos {

using Exponent = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

/// Graded lexicographic: total degree first, then lexicographic with the
/// first variable most significant.
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

class MultiPoly {
 public:
  using Terms = std::map<Exponent, Rational, GrlexLess>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> variables) : vars_(std::move(variables)) {}
  MultiPoly(std::vector<std::string> variables, const Rational& constant)
      : vars_(std::move(variables)) {
    if (!constant.is_zero()) terms_[Exponent(vars_.size(), 0)] = constant;
  }

  static MultiPoly variable(const std::vector<std::string>& variables, std::size_t index) {
    MultiPoly p(variables);
    Exponent e(variables.size(), 0);
    e.at(index) = 1;
    p.terms_[e] = Rational(1);
    return p;
  }

  static MultiPoly monomial(const std::vector<std::string>& variables, Exponent e,
                            const Rational& coeff) {
    if (e.size() != variables.size())
      throw std::invalid_argument("exponent length does not match variable count");
    MultiPoly p(variables);
    if (!coeff.is_zero()) p.terms_[std::move(e)] = coeff;
    return p;
  }

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Rational coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Adds c to the coefficient of x^e, dropping the term if it cancels.
  void add_term(const Exponent& e, const Rational& c) {
    if (e.size() != vars_.size())
      throw std::invalid_argument("exponent length does not match variable count");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::uint64_t total_degree() const {
    return terms_.empty() ? 0 : ratsos::total_degree(terms_.rbegin()->first);
  }

  Rational eval(const std::vector<Rational>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("point dimension mismatch");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
      Rational m = c;
      for (std::size_t i = 0; i < e.size(); ++i) m *= pow(point[i], e[i]);
      acc += m;
    }
    return acc;
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  MultiPoly& operator+=(const MultiPoly& o) { return accumulate(o, Rational(1)); }
  MultiPoly& operator-=(const MultiPoly& o) { return accumulate(o, Rational(-1)); }
  MultiPoly& operator*=(const Rational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Rational& s) { return a *= s; }
  friend MultiPoly operator*(const Rational& s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a.vars_.empty() ? b.vars_ : a.vars_);
    r.adopt(b);
    if (a.vars_.empty() || b.vars_.empty()) {
      // One side is a bare constant.
      const MultiPoly& c = a.vars_.empty() ? a : b;
      const MultiPoly& p = a.vars_.empty() ? b : a;
      return p * c.coeff({});
    }
    Exponent sum(r.vars_.size());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = ea[i] + eb[i];
        r.add_term(sum, ca * cb);
      }
    }
    return r;
  }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  /// Equal as polynomials: identical variable lists and terms. A constant with
  /// no variables compares equal to the same constant over any variables.
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) {
      const bool ac = a.terms_.empty() || (a.terms_.size() == 1 && total_degree_of_first(a) == 0);
      const bool bc = b.terms_.empty() || (b.terms_.size() == 1 && total_degree_of_first(b) == 0);
      if (!(a.vars_.empty() || b.vars_.empty()) || !ac || !bc) return false;
      return a.constant_term() == b.constant_term();
    }
    return a.terms_ == b.terms_;
  }

  Rational constant_term() const {
    if (terms_.empty()) return Rational(0);
    const auto& [e, c] = *terms_.begin();
    return ratsos::total_degree(e) == 0 ? c : Rational(0);
  }

  /// Highest graded-lex term first, e.g. "x^4*y^2+x^2*y^4-3*x^2*y^2+1".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += vars_[i];
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      const Rational mag = abs(c);
      if (c.sign() < 0)
        out += "-";
      else if (!out.empty())
        out += "+";
      if (mono.empty())
        out += mag.str();
      else if (mag == Rational(1))
        out += mono;
      else
        out += mag.str() + "*" + mono;
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.str(); }

 private:
  static std::uint64_t total_degree_of_first(const MultiPoly& p) {
    return ratsos::total_degree(p.terms_.begin()->first);
  }

  MultiPoly& accumulate(const MultiPoly& o, const Rational& sign) {
    adopt(o);
    if (o.vars_.empty() && !vars_.empty()) {
      add_term(Exponent(vars_.size(), 0), sign * o.constant_term());
      return *this;
    }
    for (const auto& [e, c] : o.terms_) add_term(e, sign * c);
    return *this;
  }

  void adopt(const MultiPoly& o) {
    if (vars_ == o.vars_) return;
    if (o.vars_.empty()) return;
    if (vars_.empty()) {
      const Rational c = constant_term();
      vars_ = o.vars_;
      terms_.clear();
      if (!c.is_zero()) terms_[Exponent(vars_.size(), 0)] = c;
      return;
    }
    throw std::invalid_argument("polynomials over different variable lists");
  }

  std::vector<std::string> vars_;
  Terms terms_;
};

/// Maps x_1^{d_1}...x_n^{d_n} to t^{sum k_i d_i}; colliding images add.
inline UniPoly substitute_powers(const MultiPoly& p, const PowerMap& k) {
  if (k.size() != p.nvars()) throw std::invalid_argument("power map length does not match variables");
  constexpr std::uint64_t kMaxDegree = std::uint64_t{1} << 24;
  std::map<std::uint64_t, Rational> acc;
  std::uint64_t top = 0;
  for (const auto& [e, c] : p.terms()) {
    std::uint64_t image = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      image += k[i] * e[i];
      if (image > kMaxDegree) throw std::overflow_error("projected degree too large");
    }
    acc[image] += c;
    top = std::max(top, image);
  }
  std::vector<Rational> coeffs(acc.empty() ? 0 : top + 1);
  for (const auto& [e, c] : acc) coeffs[e] = c;
  return UniPoly(std::move(coeffs));
}

/// Univariate view of a polynomial in one variable (or a constant).
inline UniPoly to_unipoly(const MultiPoly& p) {
  if (p.nvars() > 1) {
    for (const auto& [e, c] : p.terms())
      for (std::size_t i = 1; i < e.size(); ++i)
        if (e[i] != 0) throw std::invalid_argument("polynomial is not univariate");
  }
  std::vector<Rational> coeffs;
  for (const auto& [e, c] : p.terms()) {
    const std::size_t d = e.empty() ? 0 : e[0];
    if (coeffs.size() <= d) coeffs.resize(d + 1);
    coeffs[d] = c;
  }
  return UniPoly(std::move(coeffs));
}

/// Embeds u as a polynomial in variables[index].
inline MultiPoly from_unipoly(const UniPoly& u, const std::vector<std::string>& variables,
                              std::size_t index = 0) {
  MultiPoly p(variables);
  Exponent e(variables.size(), 0);
  for (std::size_t d = 0; d < u.coeffs().size(); ++d) {
    if (u.coeffs()[d].is_zero()) continue;
    if (variables.empty()) {
      if (d != 0) throw std::invalid_argument("nonconstant polynomial without variables");
    } else {
      e.at(index) = static_cast<std::uint32_t>(d);
    }
    p.add_term(e, u.coeffs()[d]);
  }
  return p;
}

inline MultiPoly pow(const MultiPoly& base, std::size_t exponent) {
  MultiPoly result(base.variables(), Rational(1));
  MultiPoly b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

}  // namespace ratsos
