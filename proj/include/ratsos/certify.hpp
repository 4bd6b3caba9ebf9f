#pragma once

// End-to-end certification of univariate polynomials.

#include <optional>
#include <stdexcept>
#include <variant>

#include "ratsos/certificate.hpp"
#include "ratsos/positivity.hpp"
#include "ratsos/triangular.hpp"
#include "ratsos/unipoly.hpp"

namespace ratsos {

/// A rational x with p(x) < 0.
struct NegativeValue {
  Rational x;
  Rational value;
};

using UniResult = std::variant<UniCertificate, NegativeValue, InfeasibilityWitness, Exhausted>;

namespace detail {

inline UniResult certify_definite(const UniPoly& p, const SearchConfig& config, int depth);

/// Certificate for a nonnegative p: strip the square factor, search the
/// definite part, then put the square factor back.
inline UniResult certify_nonnegative(const UniPoly& p, const SearchConfig& config, int depth) {
  if (p.degree() <= 0) {
    UniCertificate c;
    c.constant = p.is_zero() ? Rational(0) : p.leading();
    c.support = SupportSet{0};
    c.strategy = "constant";
    return c;
  }
  const SquareSplit split = square_factor_split(p);
  UniResult inner = certify_definite(split.definite_part, config, depth);
  if (auto* c = std::get_if<UniCertificate>(&inner)) {
    if (split.square_part != UniPoly(1)) return compose_with_square(*c, split.square_part);
  }
  return inner;
}

inline UniResult certify_definite(const UniPoly& p, const SearchConfig& config, int depth) {
  if (p.degree() <= 0) return certify_nonnegative(p, config, depth);
  const SupportSet support = SupportSet::dense(static_cast<std::uint32_t>(p.degree() / 2));
  SearchResult r = search(p, support, config);
  if (auto* out = std::get_if<SolveOutcome>(&r)) return out->certificate;

  // Fall back to p = g^2 q + m with a smaller q when the direct search fails.
  if (depth < 4) {
    if (auto split = min_shift_split(p)) {
      if (split->m.sign() >= 0 && split->q.degree() < p.degree() && !split->q.is_zero() &&
          classify(split->q).classification != Definiteness::NotNonnegative) {
        UniResult inner = certify_nonnegative(split->q, config, depth + 1);
        if (auto* c = std::get_if<UniCertificate>(&inner)) {
          UniCertificate composed = add_constant(compose_with_square(*c, split->g), split->m);
          composed.strategy += "+shift";
          return composed;
        }
      }
    }
  }
  if (auto* w = std::get_if<InfeasibilityWitness>(&r)) return *w;
  return std::get<Exhausted>(r);
}

}  // namespace detail

/// Decides p and, when nonnegative, searches for a certificate. Every
/// returned certificate has been verified exactly against p.
inline UniResult certify_univariate(const UniPoly& p, const SearchConfig& config) {
  if (p.is_zero()) {
    UniCertificate c;
    c.support = SupportSet{0};
    c.strategy = "constant";
    return c;
  }
  const DefinitenessReport report = classify(p);
  if (report.classification == Definiteness::NotNonnegative)
    return NegativeValue{*report.witness, p.eval(*report.witness)};
  UniResult r = report.classification == Definiteness::PositiveDefinite
                    ? detail::certify_definite(p, config, 0)
                    : detail::certify_nonnegative(p, config, 0);
  if (auto* c = std::get_if<UniCertificate>(&r)) {
    if (!verify(*c, p)) throw std::logic_error("pipeline produced a non-verifying certificate");
  }
  return r;
}

}  // namespace ratsos
