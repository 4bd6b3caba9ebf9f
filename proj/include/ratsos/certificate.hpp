#pragma once

// Sum-of-squares certificates and the exact verifier.
//
// A certificate asserts  p == scale * (sum_j multiplier_j * poly_j^2 + constant)
// with scale > 0, every multiplier > 0 and constant >= 0.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ratsos/multipoly.hpp"
#include "ratsos/rational.hpp"
#include "ratsos/support.hpp"
#include "ratsos/unipoly.hpp"

namespace ratsos {

template <class Poly>
struct SquareTerm {
  Rational multiplier{1};
  Poly poly;

  friend bool operator==(const SquareTerm&, const SquareTerm&) = default;
};

template <class Poly>
struct SosCertificate {
  Rational scale{1};
  std::vector<SquareTerm<Poly>> terms;
  Rational constant{0};
  SupportSet support;
  std::string strategy;

  friend bool operator==(const SosCertificate&, const SosCertificate&) = default;
};

using UniCertificate = SosCertificate<UniPoly>;
using MultiCertificate = SosCertificate<MultiPoly>;

namespace detail {

inline UniPoly constant_like(const UniPoly&, const Rational& c) { return UniPoly(c); }
inline MultiPoly constant_like(const MultiPoly& ref, const Rational& c) {
  return MultiPoly(ref.variables(), c);
}

}  // namespace detail

/// sum_k b_k q_k^2 + c0, fully expanded.
template <class Poly>
Poly expand_square_sum(const std::vector<SquareTerm<Poly>>& terms, const Rational& c0,
                       const Poly& like = Poly()) {
  Poly acc = detail::constant_like(like, c0);
  for (const auto& t : terms) acc += (t.poly * t.poly) * t.multiplier;
  return acc;
}

/// The polynomial a certificate asserts, scale included.
template <class Poly>
Poly expand(const SosCertificate<Poly>& cert, const Poly& like = Poly()) {
  return expand_square_sum(cert.terms, cert.constant, like) * cert.scale;
}

/// Sign conditions on scale, multipliers and constant.
template <class Poly>
bool well_formed(const SosCertificate<Poly>& cert) {
  if (cert.scale.sign() <= 0 || cert.constant.sign() < 0) return false;
  for (const auto& t : cert.terms)
    if (t.multiplier.sign() <= 0) return false;
  return true;
}

/// Exact check that cert is a valid certificate for p.
template <class Poly>
bool verify(const SosCertificate<Poly>& cert, const Poly& p) {
  if (!well_formed(cert)) return false;
  try {
    return expand(cert, p) == p;
  } catch (const std::invalid_argument&) {
    return false;  // mismatched variable lists
  }
}

/// (A^2 + B^2)(C^2 + D^2) == E^2 + F^2 with E = AC + BD, F = AD - BC.
template <class Poly>
std::pair<Poly, Poly> two_squares_product(const Poly& a, const Poly& b, const Poly& c,
                                          const Poly& d) {
  return {a * c + b * d, a * d - b * c};
}

/// Certificate for s^2 * p1 from one for p1: every square picks up the factor
/// s and the constant becomes the term (constant, s).
template <class Poly>
SosCertificate<Poly> compose_with_square(const SosCertificate<Poly>& cert, const Poly& s) {
  SosCertificate<Poly> out;
  out.scale = cert.scale;
  out.support = cert.support;
  out.strategy = cert.strategy;
  for (const auto& t : cert.terms) out.terms.push_back({t.multiplier, t.poly * s});
  if (!cert.constant.is_zero()) out.terms.push_back({cert.constant, s});
  return out;
}

/// Certificate for p + m from one for p (m >= 0).
template <class Poly>
SosCertificate<Poly> add_constant(SosCertificate<Poly> cert, const Rational& m) {
  cert.constant += m / cert.scale;
  return cert;
}

}  // namespace ratsos
