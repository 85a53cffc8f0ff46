#include <doctest.h>

#include <random>

#include "trigen/lattice.hpp"

using namespace trigen;

namespace {

Integer det_int(const std::vector<ZVector>& rows) {
  QMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = Rational(rows[i][j]);
  return m.det().get_num();
}

// gcd of all k x k minors of the generator matrix.
Integer minor_gcd(const std::vector<ZVector>& gens, std::size_t k) {
  const std::size_t m = gens.size(), n = gens.front().size();
  Integer g = 0;
  std::vector<std::size_t> rows(k), cols(k);
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      rows[depth] = i;
      pick_rows(i + 1, depth + 1);
    }
  };
  pick_cols = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      std::vector<ZVector> sub(k, ZVector(k));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) sub[a][b] = gens[rows[a]][cols[b]];
      Integer d = det_int(sub);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t j = start; j < n; ++j) {
      cols[depth] = j;
      pick_cols(j + 1, depth + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

std::vector<ZVector> random_gens(std::mt19937_64& rng, std::size_t count, std::size_t dim) {
  std::uniform_int_distribution<long> d(-6, 6);
  std::vector<ZVector> g(count, ZVector(dim));
  for (auto& v : g)
    for (auto& x : v) x = d(rng);
  return g;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("HNF of a small lattice") {
    const HermiteLattice l({{1, 0}, {3, 2}});
    CHECK(l.full_rank());
    CHECK(l.index() == 2);
    CHECK(l.exponent() == 2);
    CHECK(l.basis() == std::vector<ZVector>{{1, 0}, {0, 2}});
    CHECK(l.contains({5, 4}));
    CHECK_FALSE(l.contains({0, 1}));
    CHECK(*l.scale_into({0, 1}) == 2);
  }

  TEST_CASE("HNF shape and index against minor gcds") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 60; ++t) {
      const std::size_t dim = 2 + t % 3;
      const auto gens = random_gens(rng, dim + t % 2, dim);
      const HermiteLattice l(gens);
      const auto& b = l.basis();
      for (std::size_t i = 0; i < b.size(); ++i) {
        const std::size_t p = l.pivots()[i];
        CHECK(b[i][p] > 0);
        for (std::size_t j = 0; j < p; ++j) CHECK(b[i][j] == 0);
        if (i > 0) CHECK(l.pivots()[i - 1] < p);
        for (std::size_t k = 0; k < i; ++k) {
          CHECK(b[k][p] >= 0);
          CHECK(b[k][p] < b[i][p]);
        }
      }
      const Integer dn = minor_gcd(gens, dim);
      if (dn == 0) {
        CHECK_FALSE(l.full_rank());
        continue;
      }
      REQUIRE(l.full_rank());
      CHECK(l.index() == dn);
      // Largest invariant factor of the Smith form.
      CHECK(l.exponent() == dn / minor_gcd(gens, dim - 1));
    }
  }

  TEST_CASE("express returns a valid combination") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<long> d(-4, 4);
    for (int t = 0; t < 40; ++t) {
      const auto gens = random_gens(rng, 3, 3);
      const HermiteLattice l(gens);
      ZVector v(3, 0);
      for (const auto& g : gens) {
        const long c = d(rng);
        for (std::size_t j = 0; j < 3; ++j) v[j] += c * g[j];
      }
      const auto c = l.express(v);
      REQUIRE(c);
      ZVector back(3, 0);
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < 3; ++j) back[j] += (*c)[i] * gens[i][j];
      CHECK(back == v);
    }
  }

  TEST_CASE("scale_into is the least multiple inside") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
      const auto gens = random_gens(rng, 2, 2);
      const HermiteLattice l(gens);
      if (!l.full_rank()) continue;
      const ZVector v{1, t % 3};
      const Integer n = *l.scale_into(v);
      CHECK(l.contains({n * v[0], n * v[1]}));
      for (Integer k = 1; k < n; ++k) CHECK_FALSE(l.contains({k * v[0], k * v[1]}));
    }
    const HermiteLattice line({{1, 1}});
    CHECK_FALSE(line.scale_into({1, 0}).has_value());
    CHECK_THROWS(line.index());
  }
}
