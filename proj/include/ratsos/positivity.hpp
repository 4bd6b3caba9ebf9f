#pragma once

// Real-root counting and definiteness decisions for univariate polynomials.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ratsos/rational.hpp"
#include "ratsos/unipoly.hpp"

namespace ratsos {

enum class Definiteness { PositiveDefinite, PositiveSemiDefinite, NotNonnegative };

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "PositiveDefinite";
    case Definiteness::PositiveSemiDefinite: return "PositiveSemiDefinite";
    case Definiteness::NotNonnegative: return "NotNonnegative";
  }
  return "?";
}

struct DefinitenessReport {
  Definiteness classification = Definiteness::PositiveDefinite;
  int real_root_count = 0;  // distinct real roots
  std::optional<Rational> witness;
};

/// p == square_part^2 * definite_part.
struct SquareSplit {
  UniPoly square_part;
  UniPoly definite_part;
};

/// p == g^2 * q + m.
struct ShiftSplit {
  UniPoly g;
  UniPoly q;
  Rational m;
};

/// p divided by gcd(p, p'), made primitive with positive leading coefficient.
inline UniPoly squarefree_part(const UniPoly& p) {
  if (p.is_zero()) throw std::domain_error("squarefree part of the zero polynomial");
  if (p.degree() == 0) return UniPoly(1);
  UniPoly s = exact_div(p, gcd(p, p.derivative()));
  s = primitive_part(s);
  return s.leading().sign() < 0 ? -s : s;
}

/// Yun decomposition of p / lc(p) into monic squarefree, pairwise coprime
/// factors; entry i holds the factor of multiplicity i + 1.
inline std::vector<UniPoly> squarefree_decomposition(const UniPoly& p) {
  if (p.is_zero()) throw std::domain_error("squarefree decomposition of the zero polynomial");
  std::vector<UniPoly> out;
  const UniPoly f = p.monic();
  if (f.degree() <= 0) return out;
  const UniPoly fp = f.derivative();
  const UniPoly g = gcd(f, fp);
  UniPoly c = exact_div(f, g);
  UniPoly d = exact_div(fp, g) - c.derivative();
  while (c.degree() > 0) {
    UniPoly a = gcd(c, d);
    c = exact_div(c, a);
    d = exact_div(d, a) - c.derivative();
    out.push_back(a);
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

namespace detail {

/// Sturm chain of a squarefree polynomial with content-normalised remainders.
class SturmChain {
 public:
  explicit SturmChain(const UniPoly& sqf) {
    chain_.push_back(sqf);
    if (sqf.degree() <= 0) return;
    chain_.push_back(primitive_part(sqf.derivative()));
    while (true) {
      UniPoly r = rem(chain_[chain_.size() - 2], chain_.back());
      if (r.is_zero()) break;
      chain_.push_back(-primitive_part(r));
    }
  }

  int variations_at(const Rational& x) const {
    int count = 0;
    int last = 0;
    for (const auto& q : chain_) {
      const int s = q.eval(x).sign();
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  int variations_at_infinity(bool positive) const {
    int count = 0;
    int last = 0;
    for (const auto& q : chain_) {
      int s = q.leading().sign();
      if (!positive && q.degree() % 2 == 1) s = -s;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  int count(const std::optional<Rational>& lo, const std::optional<Rational>& hi) const {
    const int vlo = lo ? variations_at(*lo) : variations_at_infinity(false);
    const int vhi = hi ? variations_at(*hi) : variations_at_infinity(true);
    return vlo - vhi;
  }

 private:
  std::vector<UniPoly> chain_;
};

/// Strict upper bound on the absolute value of every real root.
inline Rational cauchy_bound(const UniPoly& p) {
  Rational best(0);
  const Rational lc = abs(p.leading());
  for (int i = 0; i < p.degree(); ++i) {
    const Rational r = abs(p.coeffs()[static_cast<std::size_t>(i)]) / lc;
    if (r > best) best = r;
  }
  return best + Rational(1);
}

}  // namespace detail

/// Number of distinct real roots in (lo, hi]; nullopt endpoints mean -inf / +inf.
inline int sturm_count(const UniPoly& p, const std::optional<Rational>& lo = std::nullopt,
                       const std::optional<Rational>& hi = std::nullopt) {
  if (p.is_zero()) throw std::domain_error("Sturm count of the zero polynomial");
  if (p.degree() == 0) return 0;
  if (lo && hi && *hi <= *lo) return 0;
  return detail::SturmChain(squarefree_part(p)).count(lo, hi);
}

/// Disjoint intervals (a, b], sorted, each holding exactly one distinct real root.
inline std::vector<std::pair<Rational, Rational>> isolate_real_roots(const UniPoly& p) {
  std::vector<std::pair<Rational, Rational>> out;
  if (p.is_zero()) throw std::domain_error("root isolation of the zero polynomial");
  if (p.degree() <= 0) return out;
  const UniPoly sqf = squarefree_part(p);
  const detail::SturmChain chain(sqf);
  const Rational bound = detail::cauchy_bound(sqf);
  std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const int n = chain.count(a, b);
    if (n == 0) continue;
    if (n == 1) {
      out.emplace_back(a, b);
      continue;
    }
    const Rational mid = (a + b) / Rational(2);
    // Push the right half first so the left half is processed first.
    stack.emplace_back(mid, b);
    stack.emplace_back(a, mid);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Shrinks an isolating interval (a, b] of sqf until its width is below `width`.
inline std::pair<Rational, Rational> refine_root(const UniPoly& sqf, std::pair<Rational, Rational> iv,
                                                 const Rational& width) {
  const detail::SturmChain chain(sqf);
  while (iv.second - iv.first >= width) {
    const Rational mid = (iv.first + iv.second) / Rational(2);
    if (chain.count(iv.first, mid) == 1)
      iv.second = mid;
    else
      iv.first = mid;
  }
  return iv;
}

namespace detail {

/// One rational sample point in every open gap between consecutive distinct
/// real roots, plus one below the smallest and one above the largest.
inline std::vector<Rational> gap_samples(const UniPoly& p) {
  const UniPoly sqf = squarefree_part(p);
  const Rational bound = cauchy_bound(sqf);
  std::vector<Rational> samples{-bound};
  const auto roots = isolate_real_roots(sqf);
  const SturmChain chain(sqf);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    const Rational& b = roots[i].second;
    if (!sqf.eval(b).is_zero()) {
      samples.push_back(b);
      continue;
    }
    auto [a, hi] = roots[i + 1];
    if (a > b) {
      samples.push_back(a);
      continue;
    }
    // b is itself the root; walk towards the next root until it lies above mid.
    while (true) {
      const Rational mid = (a + hi) / Rational(2);
      if (chain.count(b, mid) == 0) {
        samples.push_back(mid);
        break;
      }
      hi = mid;
    }
  }
  samples.push_back(bound);
  return samples;
}

}  // namespace detail

inline DefinitenessReport classify(const UniPoly& p) {
  if (p.is_zero()) throw std::domain_error("classification of the zero polynomial");
  DefinitenessReport report;
  if (p.degree() == 0) {
    if (p.leading().sign() < 0) {
      report.classification = Definiteness::NotNonnegative;
      report.witness = Rational(0);
    }
    return report;
  }
  report.real_root_count = sturm_count(p);
  for (const auto& x : detail::gap_samples(p)) {
    if (p.eval(x).sign() < 0) {
      report.classification = Definiteness::NotNonnegative;
      report.witness = x;
      return report;
    }
  }
  report.classification = report.real_root_count == 0 ? Definiteness::PositiveDefinite
                                                      : Definiteness::PositiveSemiDefinite;
  return report;
}

/// Splits a nonnegative p as s^2 * p1 with p1 positive definite, s monic.
inline SquareSplit square_factor_split(const UniPoly& p) {
  if (p.is_zero() || p.leading().sign() < 0)
    throw std::domain_error("square factor split needs a nonnegative polynomial");
  const auto parts = squarefree_decomposition(p);
  UniPoly s(1);
  UniPoly p1(p.leading());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::size_t mult = i + 1;
    s *= pow(parts[i], mult / 2);
    if (mult % 2 == 1) p1 *= parts[i];
  }
  if (p1.degree() > 0 && sturm_count(p1) != 0)
    throw std::domain_error("polynomial is not nonnegative: odd-multiplicity real root");
  if (p1.degree() % 2 != 0) throw std::domain_error("polynomial is not nonnegative");
  return {s, p1};
}

namespace detail {

/// All rational roots of a nonzero polynomial, ascending.
inline std::vector<Rational> rational_roots(const UniPoly& r) {
  std::vector<Rational> out;
  if (r.degree() <= 0) return out;
  const UniPoly sqf = squarefree_part(r);  // primitive integer coefficients
  const Rational lead = abs(sqf.leading());
  // Every rational root has the form j / lead for an integer j.
  const Rational width = Rational(1) / lead;
  for (auto iv : isolate_real_roots(sqf)) {
    iv = refine_root(sqf, iv, width);
    mpz_class lo_j = (iv.first * lead).numerator();
    mpz_class den = (iv.first * lead).denominator();
    mpz_fdiv_q(lo_j.get_mpz_t(), lo_j.get_mpz_t(), den.get_mpz_t());
    for (mpz_class j = lo_j; Rational(j) / lead <= iv.second; ++j) {
      const Rational cand = Rational(j) / lead;
      if (cand > iv.first && sqf.eval(cand).is_zero()) {
        out.push_back(cand);
        break;
      }
    }
  }
  return out;
}

/// Coefficients of R(m) = Res_x(p', p - m) recovered by interpolation.
inline UniPoly critical_value_polynomial(const UniPoly& p) {
  const UniPoly dp = p.derivative();
  const int n = dp.degree() + 1;  // R has degree at most deg p'
  std::vector<Rational> xs, ys;
  for (int i = 0; i < n + 1; ++i) {
    const Rational m(i);
    xs.push_back(m);
    ys.push_back(resultant(dp, p - UniPoly(m)));
  }
  // Newton divided differences.
  std::vector<Rational> coef = ys;
  for (std::size_t j = 1; j < xs.size(); ++j)
    for (std::size_t i = xs.size() - 1; i >= j; --i)
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
  UniPoly result;
  for (std::size_t i = coef.size(); i-- > 0;) {
    result = result * UniPoly{-xs[i], Rational(1)} + UniPoly(coef[i]);
  }
  return result;
}

}  // namespace detail

/// Writes p as g^2 * q + m with deg g >= 1. First tries the repeated factor
/// g = gcd(p, p'); failing that, uses the smallest rational critical value m
/// at which p - m acquires a repeated factor.
inline std::optional<ShiftSplit> min_shift_split(const UniPoly& p) {
  if (p.degree() < 2) return std::nullopt;
  const UniPoly g = gcd(p, p.derivative());
  if (g.degree() >= 1) {
    const UniPoly g2 = g * g;
    auto [q, r] = div_rem(p, g2);
    if (r.degree() <= 0) {
      const Rational m = r.is_zero() ? Rational(0) : r.leading();
      return ShiftSplit{g, q, m};
    }
  }
  const UniPoly crit = detail::critical_value_polynomial(p);
  if (crit.is_zero()) return std::nullopt;
  for (const auto& m : detail::rational_roots(crit)) {
    const UniPoly shifted = p - UniPoly(m);
    if (shifted.is_zero()) continue;
    UniPoly s(1);
    const auto parts = squarefree_decomposition(shifted);
    for (std::size_t i = 0; i < parts.size(); ++i) s *= pow(parts[i], (i + 1) / 2);
    if (s.degree() < 1) continue;
    return ShiftSplit{s, exact_div(shifted, s * s), m};
  }
  return std::nullopt;
}

}  // namespace ratsos
