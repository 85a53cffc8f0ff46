#include <doctest.h>

#include <random>

#include "trigen/matgroup.hpp"

using namespace trigen;

namespace {

FieldPtr sqrt2() { return NumberField::create({-2, 0, 1}, std::nullopt, "Q(sqrt2)"); }

FieldElement el(const FieldPtr& k, long a, long b) { return k->from_power_coords({a, b}); }

MatN m2(const FieldElement& a, const FieldElement& b, const FieldElement& c, const FieldElement& d) {
  return MatN::from_rows({{a, b}, {c, d}});
}

// Random element of SL(2, Z[sqrt2]) as a product of elementary matrices.
MatN random_sl2(const FieldPtr& k, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-3, 3);
  MatN g = MatN::identity(k, 2);
  for (int i = 0; i < 4; ++i) {
    g = g * MatN::elementary(k, 2, 0, 1, el(k, d(rng), d(rng)));
    g = g * MatN::elementary(k, 2, 1, 0, el(k, d(rng), d(rng)));
  }
  return g;
}

}  // namespace

TEST_SUITE("matgroup") {
  TEST_CASE("word evaluation") {
    const auto k = sqrt2();
    const auto theta = el(k, 1, 1);
    Alphabet a;
    a.add("u+", MatN::elementary(k, 2, 0, 1, k->one()));
    a.add("h", MatN::diagonal({theta, theta.inverse()}));
    CHECK(word_eval(Word::single("u+"), a) == MatN::elementary(k, 2, 0, 1, k->one()));
    const Word w({{"h", 1}, {"u+", 1}, {"h", -1}});
    CHECK(word_eval(w, a) == MatN::elementary(k, 2, 0, 1, theta * theta));
    CHECK(word_eval(Word({{"u+", 1}, {"u+", -1}}), a).is_identity());
    CHECK_THROWS_AS(word_eval(Word::single("v"), a), DomainError);
  }

  TEST_CASE("word algebra") {
    const Word w({{"a", 2}, {"b", -1}});
    CHECK(w.length() == 3);
    CHECK(w.inverse() == Word({{"b", 1}, {"a", -2}}));
    CHECK((w * w.inverse()).reduced().empty());
    CHECK(Word({{"a", 1}, {"a", 2}, {"b", 0}}).reduced() == Word::single("a", 3));
    CHECK(Word::single("u").conjugated_by(Word::single("h")) == Word({{"h", 1}, {"u", 1}, {"h", -1}}));
  }

  TEST_CASE("word evaluation is a homomorphism") {
    const auto k = sqrt2();
    std::mt19937_64 rng(29);
    Alphabet a;
    a.add("x", random_sl2(k, rng));
    a.add("y", random_sl2(k, rng));
    std::uniform_int_distribution<long> e(-2, 2);
    for (int t = 0; t < 20; ++t) {
      const Word u({{"x", e(rng)}, {"y", e(rng)}}), v({{"y", e(rng)}, {"x", e(rng)}});
      CHECK(word_eval(u * v, a) == word_eval(u, a) * word_eval(v, a));
      CHECK(word_eval(u.inverse(), a) == word_eval(u, a).inverse());
    }
  }

  TEST_CASE("matrix basics") {
    const auto k = sqrt2();
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
      const MatN g = random_sl2(k, rng), h = random_sl2(k, rng);
      CHECK(g.det().is_one());
      CHECK((g * h).det() == g.det() * h.det());
      CHECK((g * g.inverse()).is_identity());
      CHECK(g.pow(3) == g * g * g);
      CHECK(g.pow(-2) == (g * g).inverse());
      CHECK(commutator(g, h) == g * h * g.inverse() * h.inverse());
      CHECK(g.is_integral());
    }
    CHECK_THROWS_AS(MatN(k, 2).inverse(), DomainError);
  }

  TEST_CASE("Bruhat decomposition of the lower unipotent") {
    const auto e = NumberField::create({1, 0, 0, 0, 1}, std::nullopt, "Q(zeta8)");
    const auto alpha = e->from_power_coords({0, 0, 1, 0});  // i
    const auto one = e->one(), zero = e->zero();
    for (long r = 1; r <= 3; ++r) {
      CAPTURE(r);
      const auto ra = alpha * Rational(r);
      const MatN g = m2(one, zero, ra, one);
      const BruhatFactors b = bruhat_decompose(g, WeylConvention::PosUpper);
      CHECK_FALSE(b.is_borel);
      CHECK(b.u1 == m2(one, ra.inverse(), zero, one));
      CHECK(b.torus == MatN::diagonal({-ra.inverse(), -ra}));
      CHECK(b.weyl == m2(zero, one, -one, zero));
      CHECK(b.u2 == m2(one, ra.inverse(), zero, one));
      CHECK(b.recompose() == g);
      const BruhatFactors n = b.with_convention(WeylConvention::NegUpper);
      CHECK(n.weyl == m2(zero, -one, one, zero));
      CHECK(n.recompose() == g);
    }
  }

  TEST_CASE("Bruhat special shapes") {
    const auto k = sqrt2();
    const auto one = k->one(), zero = k->zero();
    const MatN w = m2(zero, -one, one, zero);
    const BruhatFactors b = bruhat_decompose(w);
    CHECK(b.u1.is_identity());
    CHECK(b.torus.is_identity());
    CHECK(b.weyl == w);
    CHECK(b.u2.is_identity());

    const MatN borel = m2(k->from_rational(2), one, zero, k->from_rational(Rational(1, 2)));
    const BruhatFactors bb = bruhat_decompose(borel);
    CHECK(bb.is_borel);
    CHECK(bb.recompose() == borel);
    CHECK_THROWS_AS(bruhat_decompose(m2(one, one, one, one)), DomainError);
  }

  TEST_CASE("Bruhat recomposition on random elements") {
    const auto k = sqrt2();
    std::mt19937_64 rng(37);
    int tested = 0;
    while (tested < 200) {
      const MatN g = random_sl2(k, rng);
      if (g(1, 0).is_zero()) continue;
      ++tested;
      for (auto conv : {WeylConvention::NegUpper, WeylConvention::PosUpper}) {
        const BruhatFactors b = bruhat_decompose(g, conv);
        CHECK(b.recompose() == g);
        CHECK(b.u1(1, 0).is_zero());
        CHECK(b.u2(1, 0).is_zero());
        CHECK(b.torus(0, 1).is_zero());
      }
    }
  }
}
