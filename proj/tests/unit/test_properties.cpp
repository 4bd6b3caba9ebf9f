#include <gtest/gtest.h>

#include <set>

#include "test_util.hpp"

using namespace ratsos;
using ratsos::testing::Gen;

namespace {

constexpr int kCases = 250;

UniCertificate random_certificate(Gen& g) {
  UniCertificate c;
  const int n = static_cast<int>(g.integer(1, 4));
  for (int i = 0; i < n; ++i) c.terms.push_back({g.positive(), g.poly(static_cast<int>(g.integer(0, 4)))});
  c.constant = g.coin() ? Rational(0) : g.positive();
  c.scale = g.positive();
  return c;
}

MultiPoly random_multi(Gen& g, const std::vector<std::string>& vars) {
  MultiPoly p(vars);
  const int terms = static_cast<int>(g.integer(1, 6));
  for (int t = 0; t < terms; ++t) {
    Exponent e(vars.size());
    for (auto& d : e) d = static_cast<std::uint32_t>(g.integer(0, 4));
    p.add_term(e, g.rational());
  }
  return p;
}

// a^2 (x - r)^2, optionally times a positive definite quadratic.
UniPoly kind_square(const UniPoly& a, const UniPoly& lin, bool extra) {
  UniPoly p = a * a * lin * lin;
  if (extra) p *= UniPoly{Rational(1), Rational(1), Rational(1)};
  return p;
}

}  // namespace

TEST(Property, SturmCountsConstructedRoots) {
  Gen g(1);
  for (int c = 0; c < kCases; ++c) {
    std::set<Rational> roots;
    const int n = static_cast<int>(g.integer(0, 5));
    while (static_cast<int>(roots.size()) < n) roots.insert(g.rational(12, 5));
    UniPoly p(g.positive());
    for (const auto& r : roots) p *= UniPoly{-r, Rational(1)};
    // Repeated roots and a root-free factor must not change the distinct count.
    if (!roots.empty() && g.coin()) p *= UniPoly{-*roots.begin(), Rational(1)};
    const Rational shift = g.rational();
    p *= UniPoly{shift * shift + g.positive(), Rational(-2) * shift, Rational(1)};
    ASSERT_EQ(sturm_count(p), n) << p;
    ASSERT_EQ(isolate_real_roots(p).size(), static_cast<std::size_t>(n)) << p;
  }
}

TEST(Property, ClassifyAgreesWithConstruction) {
  Gen g(2);
  for (int c = 0; c < kCases; ++c) {
    const UniPoly a = g.poly(static_cast<int>(g.integer(0, 3)));
    const Rational root = g.rational();
    const UniPoly lin{-root, Rational(1)};
    UniPoly p = kind_square(a, lin, g.coin());
    const int kind = static_cast<int>(g.integer(0, 2));
    if (kind == 0) p = a * a + UniPoly(g.positive());
    if (kind == 2) p -= UniPoly(g.positive());
    const auto r = classify(p);
    if (kind == 0) ASSERT_EQ(r.classification, Definiteness::PositiveDefinite) << p;
    if (kind == 1) ASSERT_EQ(r.classification, Definiteness::PositiveSemiDefinite) << p;
    if (kind == 2) {
      ASSERT_EQ(r.classification, Definiteness::NotNonnegative) << p;
      ASSERT_LT(p.eval(*r.witness).sign(), 0) << p;
    }
  }
}

TEST(Property, DivisionAndGcdIdentities) {
  Gen g(3);
  for (int c = 0; c < kCases; ++c) {
    const UniPoly a = g.poly(static_cast<int>(g.integer(0, 7)));
    const UniPoly b = g.poly(static_cast<int>(g.integer(1, 4)));
    auto [q, r] = div_rem(a, b);
    ASSERT_EQ(q * b + r, a);
    ASSERT_LT(r.degree(), b.degree());

    const UniPoly h = g.monic(static_cast<int>(g.integer(1, 3)));
    const UniPoly d = gcd(a * h, b * h);
    ASSERT_TRUE(rem(a * h, d).is_zero());
    ASSERT_TRUE(rem(b * h, d).is_zero());
    ASSERT_TRUE(rem(d, h).is_zero()) << "gcd " << d << " misses common factor " << h;
  }
}

TEST(Property, LdlReconstructsAndDetectsIndefinite) {
  Gen g(4);
  for (int c = 0; c < kCases; ++c) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 5));
    Matrix l = g.matrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) l[i][j] = i == j ? Rational(1) : Rational(0);
    std::vector<Rational> dv(n);
    for (auto& d : dv) d = g.coin() || n == 1 ? g.positive() : Rational(0);
    Matrix dl = l;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dl[i][j] = l[i][j] * dv[j];
    const Matrix b = multiply(dl, transpose(l));
    std::vector<std::uint32_t> basis(n);
    for (std::size_t i = 0; i < n; ++i) basis[i] = static_cast<std::uint32_t>(n - 1 - i);
    auto r = ldl(GramMatrix{basis, b});
    ASSERT_TRUE(std::holds_alternative<LdlResult>(r));
    ASSERT_EQ(ldl_reconstruct(std::get<LdlResult>(r)), b);

    // Gram round trip through a certificate.
    const UniPoly p = gram_polynomial(GramMatrix{basis, b});
    if (!p.is_zero()) {
      const UniCertificate cert = gram_to_certificate(GramMatrix{basis, b}, p);
      ASSERT_TRUE(verify(cert, p));
    }

    Matrix bad = b;
    const std::size_t k = static_cast<std::size_t>(g.integer(0, static_cast<long>(n) - 1));
    bad[k][k] -= b[k][k] + g.positive();
    ASSERT_TRUE(std::holds_alternative<NotPsd>(ldl(GramMatrix{basis, bad})));
  }
}

TEST(Property, KroneckerRoundTrip) {
  Gen g(5);
  const std::vector<std::vector<std::string>> var_sets{{"x"}, {"x", "y"}, {"x", "y", "z"}, {"a", "b", "c", "d"}};
  for (int c = 0; c < kCases; ++c) {
    const auto& vars = var_sets[static_cast<std::size_t>(g.integer(0, 3))];
    const MultiPoly p = random_multi(g, vars);
    if (p.is_zero()) continue;
    const PowerMap k = power_sequence(p);
    ASSERT_EQ(inverse_kronecker(substitute_powers(p, k), k, vars), p);
  }
}

TEST(Property, TwoSquaresIdentity) {
  Gen g(6);
  for (int c = 0; c < kCases; ++c) {
    const UniPoly a = g.poly(static_cast<int>(g.integer(0, 3))), b = g.poly(static_cast<int>(g.integer(0, 3)));
    const UniPoly u = g.poly(static_cast<int>(g.integer(0, 3))), v = g.poly(static_cast<int>(g.integer(0, 3)));
    auto [e, f] = two_squares_product(a, b, u, v);
    ASSERT_EQ((a * a + b * b) * (u * u + v * v), e * e + f * f);
  }
}

TEST(Property, VerifierFlipsUnderPerturbation) {
  Gen g(7);
  for (int c = 0; c < kCases; ++c) {
    const UniCertificate cert = random_certificate(g);
    const UniPoly p = expand(cert);
    ASSERT_TRUE(verify(cert, p));
    const std::size_t e = static_cast<std::size_t>(g.integer(0, std::max(0, p.degree())));
    Rational eps = g.rational();
    if (eps.is_zero()) eps = Rational(1, 7);
    ASSERT_FALSE(verify(cert, p + UniPoly::monomial(eps, e)));

    UniCertificate bad = cert;
    bad.terms[0].multiplier += eps;
    ASSERT_FALSE(verify(bad, p));
  }
}

TEST(Property, SolverSoundOnRandomPoints) {
  Gen g(8);
  int accepted = 0;
  for (int c = 0; c < kCases; ++c) {
    const std::uint32_t half = static_cast<std::uint32_t>(g.integer(1, 4));
    UniPoly p = g.poly(static_cast<int>(2 * half));
    if (p.leading().sign() < 0) p = -p;
    Assignment a;
    for (std::uint32_t j = 1; j < half; ++j) a.diagonal.push_back(g.positive(4, 4));
    auto r = border_solve(p, SupportSet::dense(half), a);
    if (auto* out = std::get_if<SolveOutcome>(&r)) {
      ++accepted;
      ASSERT_TRUE(verify(out->certificate, p));
      Rational at_zero = p.coeff(0) / p.leading();
      for (const auto& t : out->certificate.terms) at_zero -= t.multiplier * t.poly.coeff(0) * t.poly.coeff(0);
      ASSERT_EQ(at_zero, out->constant_square);
    }
  }
  EXPECT_GT(accepted, 0);
}

TEST(Property, StructuredRoundTrip) {
  Gen g(9);
  for (int c = 0; c < kCases; ++c) {
    const UniCertificate cert = random_certificate(g);
    const CertificateDocument doc{expand(cert).str(), {"x"}, to_multi(cert), g.coin()};
    ASSERT_EQ(parse_structured(render_structured(doc)), doc);
  }
}
