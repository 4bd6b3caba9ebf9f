#pragma once

// Exact Gram matrices and their LDL^T factorisation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ratsos/certificate.hpp"
#include "ratsos/rational.hpp"
#include "ratsos/unipoly.hpp"

namespace ratsos {

using Matrix = std::vector<std::vector<Rational>>;

/// p == X B X^T with X = (t^{basis_0}, t^{basis_1}, ...), basis strictly decreasing.
struct GramMatrix {
  std::vector<std::uint32_t> basis;
  Matrix entries;

  std::size_t order() const { return basis.size(); }
};

struct LdlResult {
  Matrix unit_lower;
  std::vector<Rational> pivots;
};

/// Evidence that a matrix is not positive semidefinite.
struct NotPsd {
  std::size_t index = 0;
  Rational value;  // negative pivot, or -b^2 for a zero pivot with nonzero b below it
  std::string detail;
};

inline Matrix identity_matrix(std::size_t n) {
  Matrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Rational(1);
  return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = k == 0 ? 0 : b[0].size();
  Matrix r(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

inline Matrix transpose(const Matrix& a) {
  if (a.empty()) return {};
  Matrix t(a[0].size(), std::vector<Rational>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

/// L * diag(d) * L^T.
inline Matrix ldl_reconstruct(const LdlResult& f) {
  Matrix ld = f.unit_lower;
  for (auto& row : ld)
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= f.pivots[j];
  return multiply(ld, transpose(f.unit_lower));
}

/// Unpivoted LDL^T. A zero pivot is accepted only when the rest of its column
/// is zero as well.
inline std::variant<LdlResult, NotPsd> ldl(const GramMatrix& b) {
  const std::size_t n = b.order();
  if (b.entries.size() != n) throw std::invalid_argument("Gram matrix order does not match its basis");
  for (std::size_t i = 0; i < n; ++i) {
    if (b.entries[i].size() != n) throw std::invalid_argument("Gram matrix is not square");
    for (std::size_t j = 0; j < i; ++j)
      if (b.entries[i][j] != b.entries[j][i]) throw std::invalid_argument("Gram matrix is not symmetric");
  }
  LdlResult f{identity_matrix(n), std::vector<Rational>(n, Rational(0))};
  Matrix& l = f.unit_lower;
  for (std::size_t k = 0; k < n; ++k) {
    Rational dk = b.entries[k][k];
    for (std::size_t j = 0; j < k; ++j)
      if (!l[k][j].is_zero()) dk -= l[k][j] * l[k][j] * f.pivots[j];
    if (dk.sign() < 0) return NotPsd{k, dk, "negative pivot " + dk.str() + " at index " + std::to_string(k)};
    f.pivots[k] = dk;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational v = b.entries[i][k];
      for (std::size_t j = 0; j < k; ++j)
        if (!l[i][j].is_zero() && !l[k][j].is_zero()) v -= l[i][j] * l[k][j] * f.pivots[j];
      if (dk.is_zero()) {
        if (!v.is_zero())
          return NotPsd{k, -(v * v),
                        "zero pivot at index " + std::to_string(k) + " with nonzero entry below at row " +
                            std::to_string(i)};
        continue;
      }
      l[i][k] = v / dk;
    }
  }
  return f;
}

/// X B X^T as a polynomial.
inline UniPoly gram_polynomial(const GramMatrix& b) {
  UniPoly acc;
  for (std::size_t i = 0; i < b.order(); ++i)
    for (std::size_t j = 0; j < b.order(); ++j)
      acc += UniPoly::monomial(b.entries[i][j], b.basis[i] + b.basis[j]);
  return acc;
}

/// Certificate from an exact LDL^T of a PSD Gram matrix of p.
inline UniCertificate gram_to_certificate(const GramMatrix& b, const UniPoly& p) {
  for (std::size_t i = 1; i < b.basis.size(); ++i)
    if (b.basis[i] >= b.basis[i - 1]) throw std::invalid_argument("Gram basis must strictly decrease");
  if (gram_polynomial(b) != p) throw std::invalid_argument("Gram matrix does not represent the polynomial");
  auto r = ldl(b);
  if (auto* bad = std::get_if<NotPsd>(&r)) throw std::domain_error("Gram matrix is not PSD: " + bad->detail);
  const auto& f = std::get<LdlResult>(r);
  UniCertificate cert;
  cert.strategy = "gram_ldl";
  cert.support = SupportSet(std::vector<std::uint32_t>(b.basis.rbegin(), b.basis.rend()));
  for (std::size_t k = 0; k < b.order(); ++k) {
    if (f.pivots[k].is_zero()) continue;
    UniPoly col;
    for (std::size_t i = k; i < b.order(); ++i) col += UniPoly::monomial(f.unit_lower[i][k], b.basis[i]);
    if (col == UniPoly(1))
      cert.constant += f.pivots[k];
    else
      cert.terms.push_back({f.pivots[k], col});
  }
  return cert;
}

/// Gram matrix of a certificate over the union of its monomials.
inline GramMatrix certificate_to_gram(const UniCertificate& cert) {
  std::set<std::uint32_t, std::greater<>> powers;
  for (const auto& t : cert.terms)
    for (std::size_t e = 0; e < t.poly.coeffs().size(); ++e)
      if (!t.poly.coeffs()[e].is_zero()) powers.insert(static_cast<std::uint32_t>(e));
  if (!cert.constant.is_zero() || powers.empty()) powers.insert(0);
  GramMatrix g;
  g.basis.assign(powers.begin(), powers.end());
  const std::size_t n = g.basis.size();
  g.entries.assign(n, std::vector<Rational>(n, Rational(0)));
  auto coeff_vector = [&](const UniPoly& q) {
    std::vector<Rational> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = q.coeff(g.basis[i]);
    return v;
  };
  for (const auto& t : cert.terms) {
    const auto v = coeff_vector(t.poly);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!v[i].is_zero() && !v[j].is_zero()) g.entries[i][j] += cert.scale * t.multiplier * v[i] * v[j];
  }
  if (!cert.constant.is_zero()) g.entries[n - 1][n - 1] += cert.scale * cert.constant;
  return g;
}

}  // namespace ratsos
