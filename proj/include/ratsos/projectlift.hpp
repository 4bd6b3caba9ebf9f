#pragma once

// Multivariate certificates by projection x_i -> t^{k_i}, a sparse univariate
// solve, and lifting back with exact re-verification.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ratsos/certificate.hpp"
#include "ratsos/multipoly.hpp"
#include "ratsos/positivity.hpp"
#include "ratsos/support.hpp"
#include "ratsos/triangular.hpp"

namespace ratsos {

/// k_1 = 1, k_{i+1} = 1 + max over monomials of sum_{j<=i} k_j d_j.
inline PowerMap power_sequence(const MultiPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("power sequence of the zero polynomial");
  const std::size_t n = p.nvars();
  std::vector<std::uint64_t> k;
  if (n == 0) return PowerMap{};
  k.push_back(1);
  for (std::size_t i = 1; i < n; ++i) {
    std::uint64_t best = 0;
    for (const auto& [e, c] : p.terms()) {
      std::uint64_t s = 0;
      for (std::size_t j = 0; j < i; ++j) s += k[j] * e[j];
      best = std::max(best, s);
    }
    // Keep the sequence strictly increasing even when leading variables are absent.
    k.push_back(std::max(best + 1, k.back() + 1));
  }
  PowerMap map(k);
  std::set<std::uint64_t> images;
  for (const auto& [e, c] : p.terms()) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < n; ++j) s += k[j] * e[j];
    if (!images.insert(s).second) throw std::logic_error("power sequence is not injective on the support");
  }
  return map;
}

class SupportSelectionError : public std::runtime_error {
 public:
  SupportSelectionError(Exponent m, const std::string& msg) : std::runtime_error(msg), m_(std::move(m)) {}
  const Exponent& stuck_exponent() const { return m_; }

 private:
  Exponent m_;
};

inline std::string exponent_str(const Exponent& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + ")";
}

/// Candidate half-support: halves of the all-even exponents, closed under
/// m - v for every odd exponent m and every dominated candidate v.
inline std::set<Exponent, GrlexLess> half_support(const MultiPoly& p) {
  std::set<Exponent, GrlexLess> half;
  std::vector<Exponent> rest;
  for (const auto& [e, c] : p.terms()) {
    const bool even = std::all_of(e.begin(), e.end(), [](std::uint32_t d) { return d % 2 == 0; });
    if (even) {
      Exponent h = e;
      for (auto& d : h) d /= 2;
      half.insert(h);
    } else {
      rest.push_back(e);  // already graded-lex ascending
    }
  }
  for (const auto& m : rest) {
    const auto dm = total_degree(m);
    bool discharged = false;
    std::vector<Exponent> queue(half.begin(), half.end());
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Exponent v = queue[q];
      bool dominated = total_degree(v) < dm;
      for (std::size_t i = 0; dominated && i < v.size(); ++i) dominated = v[i] <= m[i];
      if (!dominated) continue;
      discharged = true;
      Exponent diff = m;
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= v[i];
      if (half.insert(diff).second) queue.push_back(diff);
    }
    if (!discharged)
      throw SupportSelectionError(m, "support selection stuck at exponent " + exponent_str(m));
  }
  return half;
}

/// Sorted images sum k_i l_i of the half-support.
inline SupportSet power_selection(const MultiPoly& p, const PowerMap& k) {
  if (k.size() != p.nvars()) throw std::invalid_argument("power map length does not match variables");
  std::set<std::uint32_t> s;
  for (const auto& l : half_support(p)) {
    std::uint64_t img = 0;
    for (std::size_t i = 0; i < l.size(); ++i) img += k[i] * l[i];
    s.insert(static_cast<std::uint32_t>(img));
  }
  return SupportSet(std::vector<std::uint32_t>(s.begin(), s.end()));
}

/// Digit decomposition of every power of t back into a monomial.
inline MultiPoly inverse_kronecker(const UniPoly& g, const PowerMap& k, const std::vector<std::string>& variables) {
  if (k.size() != variables.size()) throw std::invalid_argument("power map length does not match variables");
  MultiPoly out(variables);
  for (std::size_t e = 0; e < g.coeffs().size(); ++e) {
    if (g.coeffs()[e].is_zero()) continue;
    Exponent mono(variables.size(), 0);
    std::uint64_t r = e;
    for (std::size_t i = variables.size(); i-- > 0;) {
      mono[i] = static_cast<std::uint32_t>(r / k[i]);
      r %= k[i];
    }
    if (r != 0) throw std::invalid_argument("power map must start at 1");
    out.add_term(mono, g.coeffs()[e]);
  }
  if (variables.empty() && !g.is_zero()) return MultiPoly(variables, g.coeff(0));
  return out;
}

class LiftError : public std::runtime_error {
 public:
  LiftError(Exponent e, Rational diff, const std::string& msg)
      : std::runtime_error(msg), exponent_(std::move(e)), difference_(std::move(diff)) {}
  const Exponent& exponent() const { return exponent_; }
  /// Lifted expansion minus target at that monomial.
  const Rational& difference() const { return difference_; }

 private:
  Exponent exponent_;
  Rational difference_;
};

/// Lifts every square term and re-verifies against p exactly.
inline MultiCertificate lift_certificate(const UniCertificate& cert, const PowerMap& k, const MultiPoly& p) {
  MultiCertificate out;
  out.scale = cert.scale;
  out.constant = cert.constant;
  out.support = cert.support;
  out.strategy = cert.strategy;
  for (const auto& t : cert.terms) out.terms.push_back({t.multiplier, inverse_kronecker(t.poly, k, p.variables())});
  if (!well_formed(out)) throw LiftError(Exponent(p.nvars(), 0), Rational(0), "lifted certificate has invalid signs");
  const MultiPoly diff = expand(out, p) - p;
  if (!diff.is_zero()) {
    const auto& [e, c] = *diff.terms().rbegin();
    throw LiftError(e, c,
                    "lifted certificate differs from the input at monomial " + exponent_str(e) + " by " + c.str());
  }
  return out;
}

/// A rational point where the polynomial is negative.
struct NegativePoint {
  std::vector<Rational> point;
  Rational value;
};

struct ProjectionTrace {
  PowerMap powers;
  UniPoly projected;
  SupportSet support;
  std::uint64_t lift_failures = 0;
};

using MultiResult = std::variant<MultiCertificate, NegativePoint, InfeasibilityWitness, Exhausted>;

/// power_sequence -> substitute_powers -> power_selection -> search -> lift.
inline MultiResult certify_multivariate(const MultiPoly& p, const SearchConfig& config,
                                        ProjectionTrace* trace = nullptr) {
  if (p.is_zero()) {
    MultiCertificate c;
    c.support = SupportSet{0};
    return c;
  }
  const PowerMap k = power_sequence(p);
  const UniPoly g = substitute_powers(p, k);
  if (trace) {
    trace->powers = k;
    trace->projected = g;
  }
  const DefinitenessReport report = classify(g);
  if (report.classification == Definiteness::NotNonnegative) {
    NegativePoint np;
    for (std::size_t i = 0; i < k.size(); ++i) np.point.push_back(pow(*report.witness, k[i]));
    np.value = p.eval(np.point);
    return np;
  }
  const SupportSet support = power_selection(p, k);
  if (trace) trace->support = support;
  if (g.degree() == 0) {
    MultiCertificate c;
    c.constant = g.leading();
    c.support = support;
    return c;
  }
  if (2 * static_cast<std::int64_t>(support.top()) != g.degree())
    return Exhausted{0, "selected support " + support.str() + " does not reach half the projected degree"};
  SearchConfig cfg = config;
  if (report.classification == Definiteness::PositiveSemiDefinite &&
      std::find(cfg.diagonal_grid.begin(), cfg.diagonal_grid.end(), Rational(0)) == cfg.diagonal_grid.end())
    cfg.diagonal_grid.push_back(Rational(0));

  std::optional<MultiCertificate> lifted;
  std::uint64_t failures = 0;
  auto accept = [&](const SolveOutcome& out) {
    try {
      lifted = lift_certificate(out.certificate, k, p);
      return true;
    } catch (const LiftError&) {
      ++failures;
      return false;
    }
  };
  SearchResult r = search(g, support, cfg, accept);
  if (trace) trace->lift_failures = failures;
  if (std::holds_alternative<SolveOutcome>(r)) {
    lifted->strategy = to_string(cfg.strategy);
    return *lifted;
  }
  if (auto* w = std::get_if<InfeasibilityWitness>(&r)) return *w;
  return std::get<Exhausted>(r);
}

}  // namespace ratsos
