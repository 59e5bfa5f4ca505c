#include <doctest.h>

#include <complex>
#include <map>
#include <random>

#include "rell/errors.hpp"
#include "rell/exact_algebra.hpp"
#include "rell/variational.hpp"

using namespace rell;

namespace {

const FieldElement w = FieldElement::omega();
const FieldElement wbar = FieldElement::omega().conj();

Poly P2() { return poly_from_integers({0, 0, 256, 0, 0, 192, 0, 0, -60, 0, 0, 4}); }
Poly P1() { return poly_from_integers({0, -640, 0, 0, -72, 0, 0, 75, 0, 0, -7}); }

FieldElement random_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-9, 9);
  std::uniform_int_distribution<long> q(1, 5);
  return FieldElement(make_rational(d(rng), q(rng)), make_rational(d(rng), q(rng)));
}

Poly random_poly(std::mt19937_64& rng, int deg) {
  std::vector<FieldElement> c;
  for (int i = 0; i <= deg; ++i) c.push_back(random_element(rng));
  if (c.back().is_zero()) c.back() = FieldElement(1);
  return Poly(c);
}

}  // namespace

TEST_CASE("field arithmetic is exact and matches the complex embedding") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const FieldElement x = random_element(rng);
    const FieldElement y = random_element(rng);
    CHECK((x + y) - y == x);
    const auto prod = (x * y).to_complex();
    CHECK(std::abs(prod - x.to_complex() * y.to_complex()) <= 1e-12 * (1 + std::abs(prod)));
    if (!y.is_zero()) CHECK((x / y) * y == x);
  }
  CHECK(w * w - w + FieldElement(1) == FieldElement(0));
  CHECK(std::abs(w.to_complex() - std::polar(1.0, M_PI / 3)) < 1e-15);
}

TEST_CASE("gcd examples") {
  const Poly t = Poly::variable();
  const Poly one(FieldElement(1));
  CHECK(gcd(t * t - one, t - one) == t - one);
  const Poly cube = poly_from_integers({-8, 0, 0, 1});
  CHECK(gcd(P2(), cube) == cube);
  const Poly f = poly_from_integers({3, 0, 6});
  CHECK(gcd(f, Poly()) == f.monic());
  CHECK(gcd(Poly(), Poly()).is_zero());
}

TEST_CASE("factor P2 over Q(sqrt(-3))") {
  const Factorization fac = factor(P2());
  CHECK(fac.constant == FieldElement(4));
  // Roots 0, -1, w, wbar with multiplicities 2, 1, 1, 1; 2, 2w^2, 2wbar^2 with multiplicity 2.
  std::map<std::string, int> want{{FieldElement(0).str(), 2},
                                  {FieldElement(-1).str(), 1},
                                  {w.str(), 1},
                                  {wbar.str(), 1},
                                  {FieldElement(2).str(), 2},
                                  {(FieldElement(2) * w * w).str(), 2},
                                  {(FieldElement(2) * wbar * wbar).str(), 2}};
  std::map<std::string, int> got;
  for (const auto& [root, m] : fac.roots) got[root.str()] = m;
  CHECK(got == want);
  CHECK(expand(fac) == P2());
}

TEST_CASE("factor small examples and errors") {
  const auto a = factor(poly_from_integers({1, -1, 1}));
  REQUIRE(a.roots.size() == 2);
  CHECK(a.roots[0].second == 1);
  const auto b = factor(Poly::monomial(FieldElement(1), 5));
  REQUIRE(b.roots.size() == 1);
  CHECK(b.roots[0].first == FieldElement(0));
  CHECK(b.roots[0].second == 5);
  CHECK_THROWS_AS(factor(poly_from_integers({-2, 0, 1})), IrreducibleOverField);
}

TEST_CASE("factor and expand round trip on random products of the problem's linear factors") {
  std::mt19937_64 rng(11);
  const std::vector<FieldElement> roots{FieldElement(0), FieldElement(-1), w, wbar, FieldElement(2),
                                        FieldElement(2) * w * w, FieldElement(2) * wbar * wbar};
  for (int trial = 0; trial < 20; ++trial) {
    Factorization f;
    f.constant = FieldElement(static_cast<long>(rng() % 5 + 1));
    for (const auto& r : roots) {
      const int m = static_cast<int>(rng() % 3);
      if (m > 0) f.roots.push_back({r, m});
    }
    const Factorization g = factor(expand(f));
    CHECK(g.constant == f.constant);
    std::map<std::string, int> a;
    std::map<std::string, int> b;
    for (const auto& [r, m] : f.roots) a[r.str()] = m;
    for (const auto& [r, m] : g.roots) b[r.str()] = m;
    CHECK(a == b);
  }
}

TEST_CASE("divrem round trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Poly f = random_poly(rng, static_cast<int>(rng() % 9));
    const Poly g = random_poly(rng, static_cast<int>(rng() % 9));
    const auto [q, r] = divrem(f, g);
    CHECK(q * g + r == f);
    CHECK(r.degree() < g.degree());
  }
}

TEST_CASE("degree is additive") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const Poly f = random_poly(rng, static_cast<int>(rng() % 6));
    const Poly g = random_poly(rng, static_cast<int>(rng() % 6));
    CHECK((f * g).degree() == f.degree() + g.degree());
  }
}

TEST_CASE("rational functions are stored reduced with monic denominators") {
  const Poly t = Poly::variable();
  const Poly one(FieldElement(1));
  const RatFunc f((t * t - one) * FieldElement(3), (t - one) * FieldElement(6));
  CHECK(f.denominator() == Poly(FieldElement(1)));
  CHECK(f.numerator() == (t + one) * FieldElement(make_rational(1, 2)));
}

TEST_CASE("residues") {
  const Poly t = Poly::variable();
  const Poly one(FieldElement(1));
  CHECK(residue_at(RatFunc(P1(), P2()), FieldElement(0)) == FieldElement(make_rational(-5, 2)));
  CHECK(residue_at(RatFunc(one, t - one), FieldElement(1)) == FieldElement(1));
  CHECK(residue_at(RatFunc(one, (t - one) * (t - one)), FieldElement(1)) == FieldElement(0));
  CHECK_THROWS_AS(residue_at(RatFunc(one, t - one), FieldElement(2)), NotAPole);
}

TEST_CASE("residue matches a numerical contour integral") {
  const RatFunc f(P1(), P2());
  for (const auto& [pole, m] : factor(P2()).roots) {
    const std::complex<double> c = pole.to_complex();
    const int n = 4000;
    const double rho = 0.05;
    std::complex<double> acc = 0;
    for (int k = 0; k < n; ++k) {
      const std::complex<double> z = std::polar(rho, 2 * M_PI * k / n);
      acc += eval_complex(f, c + z) * z;
    }
    acc /= static_cast<double>(n);
    const auto exact = residue_at(f, pole).to_complex();
    CHECK(std::abs(acc - exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
    (void)m;
  }
}

TEST_CASE("partial fractions") {
  const Poly t = Poly::variable();
  const Poly one(FieldElement(1));
  const RatFunc f(one, t * t - one);
  const auto pf = partial_fractions(f);
  CHECK(pf.polynomial_part.is_zero());
  REQUIRE(pf.terms.size() == 2);
  for (const auto& term : pf.terms) {
    CHECK(term.order == 1);
    CHECK(term.coefficient == FieldElement(make_rational(term.pole == FieldElement(1) ? 1 : -1, 2)));
  }
  CHECK(pf.resum() == f);

  const auto pt = partial_fractions(RatFunc(t));
  CHECK(pt.polynomial_part == t);
  CHECK(pt.terms.empty());

  const RatFunc g(P1(), P2());
  const auto pg = partial_fractions(g);
  CHECK(pg.resum() == g);
  bool found = false;
  for (const auto& term : pg.terms) {
    if (term.pole == FieldElement(0) && term.order == 1) {
      CHECK(term.coefficient == FieldElement(make_rational(-5, 2)));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("limit equation coefficients are the stated integer polynomials") {
  const auto c = variational::limit_coefficients();
  CHECK(c[0] == P2());
  CHECK(c[1] == P1());
  CHECK(c[2] == poly_from_integers({0, 0, 0, 0, 0, 0, 0, 0, -64, 0, 0, 2}));
}
