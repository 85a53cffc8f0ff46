// Acceptance suite: one PASS/FAIL line per primary criterion. Exits nonzero
// when any criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "trigen/lattice.hpp"
#include "trigen/pipeline.hpp"
#include "trigen/su21.hpp"
#include "trigen/verify.hpp"

using namespace trigen;

namespace {

const std::string kConfigs = std::string(TRIGEN_SOURCE_DIR) + "/configs/";

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      failures.push_back(what);
      ok = false;
    }
  }

  std::string summary() const {
    std::string out = detail.str();
    if (!failures.empty()) {
      out += " | failed:";
      for (const auto& f : failures) out += " " + f + ";";
    }
    return out;
  }
};

// Every closure run in the suite is checked against Lagrange here.
std::size_t g_lagrange_runs = 0;
std::vector<std::string> g_lagrange_failures;

ClosureResult checked(ClosureResult c, const std::string& label) {
  ++g_lagrange_runs;
  if (c.index && c.subgroup_order * *c.index != c.ambient_order) g_lagrange_failures.push_back(label);
  if (!c.index && !c.capped && c.method == ClosureResult::Method::Bfs) g_lagrange_failures.push_back(label);
  return c;
}

std::vector<ResidueMat> reduce_all(const GeneratorTriple& t, const ResidueRing& r,
                                   const std::vector<std::string>& names = {}) {
  std::vector<ResidueMat> out;
  for (const auto& g : t.gens)
    if (names.empty() || std::find(names.begin(), names.end(), g.name) != names.end())
      out.push_back(reduce_mod(g.matrix, r));
  return out;
}

FieldPtr sqrt2() { return NumberField::create({-2, 0, 1}, std::nullopt, "Q(sqrt2)"); }

// ---------------------------------------------------------------------------
// Oracles

// Least (x, y), x >= 0, y > 0, with N(x + y w) = +-1 where N = x^2 + T x y + C y^2.
std::pair<long, long> pell_oracle(long T, long C, long y_max) {
  for (long y = 1; y <= y_max; ++y) {
    std::pair<long, long> best{0, 0};
    for (long s : {-1L, 1L}) {
      const long b = T * y, c = C * y * y - s, disc = b * b - 4 * c;
      if (disc < 0) continue;
      long r = static_cast<long>(std::sqrt(static_cast<double>(disc)));
      while (r * r > disc) --r;
      while ((r + 1) * (r + 1) <= disc) ++r;
      if (r * r != disc || (r - b) % 2 != 0) continue;
      for (long x : {(-r - b) / 2, (r - b) / 2})
        if (x >= 0 && (best.second == 0 || x < best.first)) best = {x, y};
    }
    if (best.second != 0) return best;
  }
  return {0, 0};
}

// Real roots of f by sign changes of a double evaluation on a fine grid.
int float_real_roots(const ZVector& c) {
  double bound = 1;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) bound = std::max(bound, 1 + std::abs(c[i].get_d()));
  auto f = [&](double x) {
    double y = 0;
    for (std::size_t i = c.size(); i-- > 0;) y = y * x + c[i].get_d();
    return y;
  };
  int n = 0;
  double prev = f(-bound);
  for (int i = 1; i <= 400000; ++i) {
    const double y = f(-bound + 2 * bound * i / 400000.0);
    if ((y < 0) != (prev < 0)) ++n;
    prev = y;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Criteria

Outcome unit_machinery() {
  Outcome o;
  struct Case {
    long d;
    ZVector poly;
    long T, C;
  };
  // Z[sqrt2], Z[sqrt3] and the maximal order Z[(1 + sqrt5)/2].
  for (const Case& c : {Case{2, {-2, 0, 1}, 0, -2}, Case{3, {-3, 0, 1}, 0, -3}, Case{5, {-1, -1, 1}, 1, -1}}) {
    const auto k = NumberField::create(c.poly);
    const auto [x, y] = pell_oracle(c.T, c.C, 10000);
    const bool match = y > 0 && fundamental_unit_real_quadratic(*k) == k->from_power_coords({x, y});
    o.expect(match, "fundamental unit for d = " + std::to_string(c.d));
    o.detail << "d=" << c.d << ": " << x << "+" << y << "w ";
  }
  const JobConfig cfg = load_config(kConfigs + "fields.json");
  int checked_fields = 0;
  for (const auto& spec : cfg.fields) {
    if (!spec.poly) continue;
    const FieldPtr k = make_field(spec);
    const int r1 = float_real_roots(*spec.poly);
    const int r2 = (k->degree() - r1) / 2;
    o.expect(unit_rank(*k) == r1 + r2 - 1, "unit rank of " + spec.name);
    ++checked_fields;
  }
  o.expect(checked_fields >= 5, "fewer than 5 shipped fields");
  o.detail << "| unit rank on " << checked_fields << " shipped fields";
  return o;
}

Outcome subring_indices() {
  Outcome o;
  const auto k = sqrt2();
  const auto theta = k->from_power_coords({1, 1});
  // (1 + sqrt2)^r = a + b sqrt2 with (a, b) -> (a + 2b, a + b); the
  // coordinate matrix [[1, 0], [a, b]] has determinant b.
  Integer a = 1, b = 1;
  for (long r = 1; r <= 12; ++r) {
    const SubringIndex idx = subring_index(theta, r);
    o.expect(idx.is_finite() && idx.value() == abs(b), "index at r = " + std::to_string(r));
    if (r > 1) o.detail << ",";
    o.detail << (idx.is_finite() ? to_string(idx.value()) : "INF");
    const Integer na = a + 2 * b, nb = a + b;
    a = na;
    b = nb;
  }
  return o;
}

Outcome word_identities() {
  Outcome o;
  const auto k = sqrt2();
  const auto tc = select_theta(*k, UnitSource::pell());
  const auto tr = build_noncm(k, tc, 1);
  const auto targets = integral_basis_elements(k);
  const auto ec = elementary_words(tc.theta, tr.get("U+"), 1, targets);
  const Alphabet alpha = tr.alphabet();
  for (std::size_t i = 0; i < ec.targets.size(); ++i) {
    const auto& t = ec.targets[i];
    o.expect(word_eval(t.word, alpha) == MatN::elementary(k, 2, 0, 1, t.achieved), "word " + std::to_string(i));
    o.expect(t.achieved == t.target * Rational(t.scale), "scale " + std::to_string(i));
  }
  const HermiteLattice reach(ec.lattice_basis);
  for (const auto& b : targets) {
    ZVector v;
    for (const auto& c : b.integral_coords()) v.push_back(ec.N * c.get_num());
    o.expect(reach.contains(v), "N O_K not inside the reachable lattice");
  }
  o.detail << "N=" << ec.N << " index=" << ec.lattice_index << " targets=" << ec.targets.size();
  return o;
}

Outcome bruhat() {
  Outcome o;
  const auto k = sqrt2();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> d(-3, 3);
  int n = 0;
  while (n < 200) {
    MatN g = MatN::identity(k, 2);
    for (int i = 0; i < 3; ++i)
      g = g * MatN::elementary(k, 2, 0, 1, k->from_power_coords({d(rng), d(rng)})) *
          MatN::elementary(k, 2, 1, 0, k->from_power_coords({d(rng), d(rng)}));
    if (g(1, 0).is_zero()) continue;
    ++n;
    const BruhatFactors b = bruhat_decompose(g);
    o.expect(b.recompose() == g, "random element " + std::to_string(n));
  }
  const auto e = NumberField::create({1, 0, 0, 0, 1}, std::nullopt, "Q(zeta8)");
  const auto alpha = e->from_power_coords({0, 0, 1, 0});
  const auto one = e->one(), zero = e->zero();
  for (long r = 1; r <= 3; ++r) {
    const auto ra = alpha * Rational(r);
    const BruhatFactors b = bruhat_decompose(MatN::elementary(e, 2, 1, 0, ra), WeylConvention::PosUpper);
    const MatN v = MatN::from_rows({{one, ra.inverse()}, {zero, one}});
    const bool display = b.u1 == v && b.u2 == v && b.torus == MatN::diagonal({-ra.inverse(), -ra}) &&
                         b.weyl == MatN::from_rows({{zero, one}, {-one, zero}});
    o.expect(display, "CM display at r = " + std::to_string(r));
  }
  o.detail << n << " random recompositions, CM display r=1..3";
  return o;
}

Outcome congruence_surjectivity() {
  Outcome o;
  const auto k = sqrt2();
  const auto tr = build_noncm(k, select_theta(*k, UnitSource::pell()), 1);
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    const ResidueRing r(k, p);
    const auto full = checked(closure(r, reduce_all(tr, r)), "Q(sqrt2) mod " + std::to_string(p));
    Integer expected = 1;
    for (int deg : r.factor_degrees()) {
      Integer q;
      mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(deg));
      expected *= sl_order_over_field(q, 2);
    }
    o.expect(full.surjective == Tri::Yes, "mod " + std::to_string(p) + " not surjective");
    o.expect(full.ambient_order == ambient_order(r, 2).order && full.ambient_order == expected,
             "ambient order mod " + std::to_string(p));
    o.expect(full.index && full.subgroup_order * *full.index == full.ambient_order, "Lagrange mod " + std::to_string(p));
    const auto borel = checked(closure(r, reduce_all(tr, r, {"U+", "H"})), "Borel mod " + std::to_string(p));
    o.expect(borel.surjective == Tri::No, "Borel control surjective mod " + std::to_string(p));
    o.detail << "p=" << p << ": " << full.subgroup_order << "/" << full.ambient_order << " borel "
             << borel.subgroup_order << "  ";
  }
  return o;
}

Outcome cm_pipeline() {
  Outcome o;
  const auto f = sqrt2();
  const auto e = NumberField::create({1, 0, 0, 0, 1}, std::nullopt, "Q(zeta8)");
  const SubfieldEmbedding emb(f, e, e->from_power_coords({0, 1, 0, -1}));
  const auto tc = select_theta_cm(emb, UnitSource::pell());
  const auto alpha = e->from_power_coords({0, 0, 1, 0});
  try {
    (void)build_cm(emb, alpha, tc, 1);
  } catch (const Error& ex) {
    o.expect(false, std::string("build_cm: ") + ex.what());
  }
  const auto eps = f->from_power_coords({1, 1});
  int pairs = 0;
  const auto one = e->one(), zero = e->zero();
  for (long a = -1; a <= 1 && pairs < 20; ++a)
    for (long b = -2; b <= 2 && pairs < 20; ++b)
      for (long c = 0; c <= 1 && pairs < 20; ++c) {
        const auto x = e->from_power_coords({a, b, c, 1 - b});
        if (emb.contains(x)) continue;
        const auto [t, n] = relative_trace_norm(emb, x);
        if (t.is_zero()) continue;
        FieldElement theta;
        try {
          theta = congruent_unit_power(eps, t, 1000);
        } catch (const CapExceeded&) {
          continue;
        }
        for (int s = 1; s <= 2 && pairs < 20; ++s) {
          const auto th = theta.pow(s);
          const auto g = cmprime_g_element(emb, x, th);
          // Direct product of the three factors.
          const auto T = emb.map(t), N = emb.map(n), Th = emb.map(th);
          const MatN direct = MatN::from_rows({{one, zero}, {-x / Th, one}}) *
                              MatN::from_rows({{one, (Th - one) / T}, {zero, one}}) *
                              MatN::from_rows({{one, zero}, {x, one}});
          o.expect(g.g == direct, "product for pair " + std::to_string(pairs));
          o.expect(direct(0, 0) == one + x * (Th - one) / T, "a formula for pair " + std::to_string(pairs));
          o.expect(direct(1, 0) == N * (one - Th.inverse()) / T, "c formula for pair " + std::to_string(pairs));
          ++pairs;
        }
      }
  o.expect(pairs == 20, "only " + std::to_string(pairs) + " admissible pairs");
  o.detail << pairs << " (x, theta) pairs";
  return o;
}

Outcome su21() {
  Outcome o;
  const auto st = make_su21_setting(3, Integer(-1));
  const auto t = st.in_f(0, 1);
  for (long r : {1L, 2L}) {
    const auto b = build_su21(st, t, r, 1);
    for (const auto& g : b.triple.gens) o.expect(su21_check(g.matrix, st.data), g.name + " at r = " + std::to_string(r));
  }
  // The height-3 box contains every pair of lower height.
  const auto rep = su21_commutator_checks(st, t, 3);
  o.expect(rep.commutators_failed == 0, "commutators up to height 3");
  const long checked = rep.commutators_checked;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<long> d(-2, 2);
  const auto k = st.field;
  auto random_sl2 = [&] {
    MatN g = MatN::identity(k, 2);
    for (int i = 0; i < 3; ++i)
      g = g * MatN::elementary(k, 2, 0, 1, k->from_rational(d(rng))) *
          MatN::elementary(k, 2, 1, 0, k->from_rational(d(rng)));
    return g;
  };
  for (int i = 0; i < 100; ++i) {
    const MatN a = random_sl2(), b = random_sl2();
    o.expect(sl2_to_su21(a * b, st.sqrt_z) == sl2_to_su21(a, st.sqrt_z) * sl2_to_su21(b, st.sqrt_z),
             "homomorphism pair " + std::to_string(i));
  }
  o.detail << checked << " commutators (height <= 3), 100 homomorphism pairs";
  return o;
}

Outcome multone() {
  Outcome o;
  const JobConfig cfg = load_config(kConfigs + "example.json");
  const MultoneSpec* spec = nullptr;
  for (const auto& f : cfg.fields)
    if (f.multone) spec = &*f.multone;
  if (!spec) {
    o.expect(false, "no shipped multone descriptor");
    return o;
  }
  const auto q = rational_field();
  std::vector<std::vector<Rational>> rows(spec->levi.begin(), spec->levi.end());
  std::vector<FieldElement> u;
  for (const auto& c : spec->u_col) u.push_back(q->from_rational(c));
  const auto res = build_sln_multone(spec->n, MatN::from_rationals(q, rows), spec->exponents, u);
  o.expect(!res.wedge.det_upper.is_zero() && !res.wedge.det_lower.is_zero(), "wedge determinant");
  const std::vector<std::pair<std::uint64_t, Integer>> expect{{2, 168}, {3, 5616}};
  for (const auto& [p, order] : expect) {
    const ResidueRing r(q, p);
    const auto c = checked(closure(r, reduce_all(res.triple, r)), "SL3 mod " + std::to_string(p));
    o.expect(c.surjective == Tri::Yes && c.subgroup_order == order && c.ambient_order == sl_order_over_field(p, 3),
             "SL(3, " + std::to_string(p) + ")");
    o.detail << "p=" << p << ": " << c.subgroup_order << " ";
  }
  o.detail << "wedge " << res.wedge.det_upper.to_string() << ", " << res.wedge.det_lower.to_string();
  return o;
}

Outcome finite_group_core() {
  Outcome o;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL}) {
    const ResidueRing r(rational_field(), q);
    const Integer enumerated = enumerate_sl_order(r, 2);
    const auto c = checked(closure(r, elementary_generating_set(2)), "SL(2, " + std::to_string(q) + ")");
    o.expect(c.subgroup_order == enumerated && c.surjective == Tri::Yes, "SL(2, " + std::to_string(q) + ")");
    o.detail << "q=" << q << ": " << enumerated << " ";
  }
  o.expect(g_lagrange_failures.empty(), "Lagrange failed on " + std::to_string(g_lagrange_failures.size()) + " runs");
  o.detail << "| Lagrange on " << g_lagrange_runs << " closure runs";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"unit machinery", 1, unit_machinery},
      {"subring index r = 1..12", 1, subring_indices},
      {"word identities", 5, word_identities},
      {"Bruhat decomposition", 5, bruhat},
      {"congruence surjectivity Q(sqrt2)", 60, congruence_surjectivity},
      {"CM pipeline", 10, cm_pipeline},
      {"SU(2,1)", 10, su21},
      {"SL(3, Z) multone", 30, multone},
      {"finite-group core", 60, finite_group_core},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.expect(false, "time budget exceeded");
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << c.name << "  (" << std::fixed
              << std::setprecision(2) << secs << " s / " << c.budget_s << " s)  " << o.summary() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
