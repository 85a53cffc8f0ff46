#include <doctest.h>

#include <cmath>
#include <random>

#include "trigen/numberfield.hpp"

using namespace trigen;

namespace {

FieldPtr sqrt2() { return NumberField::create({-2, 0, 1}, std::nullopt, "Q(sqrt2)"); }

FieldElement E(const FieldPtr& k, std::initializer_list<long> c) {
  QVector v;
  for (long x : c) v.emplace_back(x);
  v.resize(static_cast<std::size_t>(k->degree()), 0);
  return k->from_power_coords(v);
}

FieldElement random_element(const FieldPtr& k, std::mt19937_64& rng, long h = 6) {
  std::uniform_int_distribution<long> d(-h, h);
  QVector v;
  for (int i = 0; i < k->degree(); ++i) v.push_back(Rational(d(rng)) / (1 + (d(rng) + h) % 3));
  return k->from_power_coords(v);
}

// Signature oracle in doubles: real roots of f counted as sign changes on a
// fine grid inside the Cauchy bound.
int float_real_roots(const std::vector<double>& c) {
  double bound = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) bound = std::max(bound, std::abs(c[i] / c.back()));
  bound += 1;
  auto f = [&](double x) {
    double y = 0;
    for (std::size_t i = c.size(); i-- > 0;) y = y * x + c[i];
    return y;
  };
  int n = 0;
  double prev = f(-bound);
  for (int i = 1; i <= 200000; ++i) {
    const double x = -bound + 2 * bound * i / 200000.0;
    const double y = f(x);
    if ((y < 0) != (prev < 0)) ++n;
    prev = y;
  }
  return n;
}

}  // namespace

TEST_SUITE("numberfield") {
  TEST_CASE("signatures") {
    CHECK(sqrt2()->signature() == Signature{2, 0});
    CHECK(NumberField::create({1, 0, 1})->signature() == Signature{0, 1});
    const auto z10 = NumberField::create({1, -1, 1, -1, 1});
    CHECK(float_real_roots({1, -1, 1, -1, 1}) == 0);
    CHECK(z10->signature() == Signature{0, 2});
    const auto cubic = NumberField::create({-2, 0, 0, 1});
    CHECK(float_real_roots({-2, 0, 0, 1}) == 1);
    CHECK(cubic->signature() == Signature{1, 1});
  }

  TEST_CASE("construction errors") {
    CHECK_THROWS_AS(NumberField::create({-1, 0, 1}), DomainError);  // (x-1)(x+1)
    CHECK_THROWS_AS(NumberField::create({4, 0, 0, 0, 1}), DomainError);  // (x^2-2x+2)(x^2+2x+2)
    CHECK_THROWS_AS(NumberField::create({1, 0, 2}), DomainError);  // not monic
    // A basis that does not contain Z[x].
    CHECK_THROWS_AS(NumberField::create({-2, 0, 1}, QMatrix::from_rows({{1, 0}, {0, 2}})), DomainError);
  }

  TEST_CASE("arithmetic in Q(sqrt2)") {
    const auto k = sqrt2();
    const auto a = E(k, {1, 1}), b = E(k, {-1, 1});
    CHECK((a * b).is_one());
    CHECK(a.inverse() == b);
    CHECK(a + k->zero() == a);
    CHECK(a.norm() == -1);
    CHECK(a.trace() == 2);
    CHECK_THROWS_AS(a / k->zero(), DomainError);
  }

  TEST_CASE("inverse via the extended gcd oracle") {
    const auto k = sqrt2();
    const auto a = E(k, {1, 1});
    const XGcd x = xgcd(a.as_poly(), k->modulus());
    REQUIRE(x.g.degree() == 0);
    const QPoly inv = x.s * (Rational(1) / x.g.coeff(0));
    CHECK(a.inverse() == k->from_power_coords({inv.coeff(0), inv.coeff(1)}));
  }

  TEST_CASE("field axioms on random elements") {
    std::mt19937_64 rng(7);
    for (const FieldPtr& k : {sqrt2(), NumberField::create({1, 0, 0, 0, 1}), NumberField::create({-2, 0, 0, 1})}) {
      for (int t = 0; t < 40; ++t) {
        const auto a = random_element(k, rng), b = random_element(k, rng), c = random_element(k, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * b).norm() == a.norm() * b.norm());
        CHECK((a + b).trace() == a.trace() + b.trace());
        if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
      }
    }
  }

  TEST_CASE("minimal polynomials") {
    const auto k = sqrt2();
    CHECK(minimal_polynomial(E(k, {1, 1})) == QPoly(QVector{-1, -2, 1}));
    CHECK(minimal_polynomial(E(k, {2})) == QPoly(QVector{-2, 1}));
    CHECK(minimal_polynomial(E(k, {0, 1})) == QPoly(QVector{-2, 0, 1}));
  }

  TEST_CASE("minimal polynomial annihilates its element") {
    std::mt19937_64 rng(9);
    const auto k = NumberField::create({1, 0, 0, 0, 1});
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(k, rng, 3);
      const QPoly m = minimal_polynomial(a);
      FieldElement v = k->zero();
      for (std::size_t i = m.coeffs().size(); i-- > 0;) v = v * a + k->from_rational(m.coeffs()[i]);
      CHECK(v.is_zero());
      CHECK(k->degree() % m.degree() == 0);
    }
  }

  TEST_CASE("subring index against the coordinate determinant") {
    const auto k = sqrt2();
    CHECK(subring_index(E(k, {1, 1}), 1) == SubringIndex::finite(1));
    CHECK_FALSE(subring_index(E(k, {3}), 1).is_finite());
    // (1+sqrt2)^2 = 3 + 2 sqrt2: coordinate rows [1,0], [3,2].
    CHECK(subring_index(E(k, {1, 1}), 2).value() == QMatrix::from_rows({{1, 0}, {3, 2}}).det());
    CHECK_THROWS_AS(subring_index(E(k, {1, 1}), 0), DomainError);
    CHECK_THROWS_AS(subring_index(k->from_power_coords({Rational(1, 2), 0}), 1), DomainError);
  }

  TEST_CASE("unit rank") {
    CHECK(unit_rank(*sqrt2()) == 1);
    CHECK(unit_rank(*NumberField::create({1, 0, 1})) == 0);
    CHECK(unit_rank(*NumberField::create({1, -1, 1, -1, 1})) == 1);
  }

  TEST_CASE("CM detection") {
    const auto k = sqrt2();
    const auto e = NumberField::create({1, 0, 0, 0, 1});
    const auto z = e->generator();
    const auto emb = z + z.inverse();
    CHECK(minimal_polynomial(emb) == QPoly(QVector{-2, 0, 1}));
    CHECK(is_cm_field(*e, *k, emb));
    CHECK_FALSE(is_cm_field(*k, *rational_field(), k->one()));
    const auto biq = NumberField::create({1, 0, -10, 0, 1});  // sqrt2 + sqrt3
    CHECK(biq->signature() == Signature{4, 0});
    const auto y = biq->generator();
    const auto s2 = (y.pow(3) - y * Rational(9)) * Rational(1, 2);
    CHECK(s2 * s2 == biq->from_rational(2));
    CHECK_FALSE(is_cm_field(*biq, *k, s2));
  }

  TEST_CASE("total positivity") {
    const auto k = sqrt2();
    CHECK(totally_positive(E(k, {2})));
    CHECK_FALSE(totally_positive(E(k, {0, 1})));
    CHECK(totally_positive(E(k, {3, 1})));
    CHECK_FALSE(totally_positive(E(k, {1, 1})));  // 1 - sqrt2 < 0
    CHECK_THROWS_AS(totally_positive(k->zero()), DomainError);
  }

  TEST_CASE("subfield embedding maps and pulls back") {
    const auto k = sqrt2();
    const auto e = NumberField::create({1, 0, 0, 0, 1});
    const SubfieldEmbedding emb(k, e, e->from_power_coords({0, 1, 0, -1}));
    CHECK(emb.relative_degree() == 2);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(k, rng), b = random_element(k, rng);
      CHECK(emb.map(a * b) == emb.map(a) * emb.map(b));
      CHECK(emb.map(a + b) == emb.map(a) + emb.map(b));
      const auto back = emb.preimage(emb.map(a));
      REQUIRE(back);
      CHECK(*back == a);
    }
    CHECK_FALSE(emb.contains(e->generator()));
    CHECK_THROWS_AS(SubfieldEmbedding(k, e, e->generator()), DomainError);
  }
}
