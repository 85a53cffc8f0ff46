#include <doctest.h>

#include <random>
#include <set>

#include "trigen/poly.hpp"

using namespace trigen;

namespace {

QPoly P(std::initializer_list<long> c) {
  QVector v;
  for (long x : c) v.emplace_back(x);
  return QPoly(v);
}

QPoly random_poly(std::mt19937_64& rng, int deg) {
  std::uniform_int_distribution<long> d(-9, 9);
  QVector v;
  for (int i = 0; i <= deg; ++i) v.emplace_back(d(rng));
  if (v.back() == 0) v.back() = 1;
  return QPoly(v);
}

// Sign changes of p on a fine rational grid; exact for polynomials whose
// roots are separated by more than the step and avoid the grid points.
int sampled_root_count(const QPoly& p, long lo, long hi, long steps_per_unit) {
  int count = 0;
  Rational prev = p.eval(Rational(lo));
  for (long i = lo * steps_per_unit + 1; i <= hi * steps_per_unit; ++i) {
    const Rational cur = p.eval(Rational(i) / steps_per_unit);
    if (sgn(cur) != 0 && sgn(prev) != 0 && sgn(cur) != sgn(prev)) ++count;
    if (sgn(cur) != 0) prev = cur;
  }
  return count;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("rational parsing canonicalises") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK(parse_rational("2/-4") == Rational(-1, 2));
    CHECK(to_string(Rational(-1, 2)) == "-1/2");
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  }

  TEST_CASE("determinant, inverse and solve") {
    const QMatrix a = QMatrix::from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
    CHECK(a.det() == 18);
    CHECK(a * a.inverse() == QMatrix::identity(3));
    const auto x = a.solve({1, 2, 3});
    REQUIRE(x);
    CHECK(a * *x == QVector{1, 2, 3});
    const QMatrix sing = QMatrix::from_rows({{1, 2}, {2, 4}});
    CHECK(sing.rank() == 1);
    CHECK_THROWS_AS(sing.inverse(), DomainError);
    CHECK_FALSE(sing.solve({1, 0}).has_value());
    const auto ker = sing.kernel();
    REQUIRE(ker.size() == 1);
    CHECK(is_zero(sing * ker[0]));
  }

  TEST_CASE("determinant is multiplicative on random matrices") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-5, 5);
    for (int t = 0; t < 30; ++t) {
      QMatrix a(3, 3), b(3, 3);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
          a(i, j) = d(rng);
          b(i, j) = Rational(d(rng)) / (1 + (t % 3));
        }
      CHECK((a * b).det() == a.det() * b.det());
      CHECK(a.transpose().det() == a.det());
    }
  }

  TEST_CASE("polynomial division and gcd") {
    const QPoly f = P({-1, 0, 0, 1});  // x^3 - 1
    const QPoly g = P({-1, 1});        // x - 1
    const auto [q, r] = f.divmod(g);
    CHECK(q == P({1, 1, 1}));
    CHECK(r.is_zero());
    CHECK(gcd(P({-1, 0, 1}), P({1, 2, 1})) == P({1, 1}));
    CHECK_THROWS(f.divmod(QPoly()));
  }

  TEST_CASE("extended gcd identity on random pairs") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
      const QPoly a = random_poly(rng, 1 + t % 4), b = random_poly(rng, 1 + (t / 4) % 3);
      const XGcd x = xgcd(a, b);
      CHECK(x.s * a + x.t * b == x.g);
      CHECK((a % x.g).is_zero());
      CHECK((b % x.g).is_zero());
    }
  }

  TEST_CASE("Sturm counts agree with grid sampling") {
    // Products of distinct linear factors with half-integer roots: the grid
    // of step 1/4 separates them and never hits one.
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-6, 6);
    for (int t = 0; t < 25; ++t) {
      QPoly p = P({1});
      std::set<long> roots;
      const int k = 1 + t % 4;
      while (static_cast<int>(roots.size()) < k) roots.insert(d(rng));
      for (long r : roots) p = p * QPoly(QVector{Rational(-(2 * r + 1), 2), 1});
      // An irreducible quadratic factor adds no real roots.
      p = p * P({1, 0, 1});
      const SturmSequence s(p);
      CHECK(s.count_real_roots() == k);
      CHECK(s.count_real_roots() == sampled_root_count(p, -8, 8, 4));
      CHECK(s.count_roots(0, 8) == sampled_root_count(p, 0, 8, 4));
    }
  }

  TEST_CASE("isolating intervals bracket each root") {
    const QPoly p = P({-2, 0, 1});  // roots -sqrt2, sqrt2
    const auto iv = isolate_real_roots(p);
    REQUIRE(iv.size() == 2);
    for (const auto& i : iv) {
      if (i.lo == i.hi) continue;
      CHECK(sgn(p.eval(i.lo)) * sgn(p.eval(i.hi)) < 0);
      const Interval finer = refine_root(p, i);
      CHECK(finer.width() < i.width());
    }
    CHECK(iv[0].hi <= iv[1].lo);
    const auto exact = isolate_real_roots(P({-2, 1}));
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].lo <= 2);
    CHECK(exact[0].hi >= 2);
    CHECK(cauchy_root_bound(p) > 1);
  }

  TEST_CASE("interval evaluation encloses point values") {
    const QPoly p = P({1, -3, 0, 2});
    const Interval x{Rational(-1, 2), Rational(3, 4)};
    const Interval y = eval_interval(p, x);
    for (int i = 0; i <= 10; ++i) {
      const Rational t = x.lo + (x.hi - x.lo) * Rational(i) / 10;
      CHECK(y.lo <= p.eval(t));
      CHECK(p.eval(t) <= y.hi);
    }
  }
}
