#include <benchmark/benchmark.h>

#include "trigen/verify.hpp"

using namespace trigen;

namespace {

FieldPtr sqrt2() {
  static const FieldPtr k = NumberField::create({-2, 0, 1}, std::nullopt, "Q(sqrt2)");
  return k;
}

GeneratorTriple sqrt2_triple() {
  const FieldPtr k = sqrt2();
  return build_noncm(k, select_theta(*k, UnitSource::pell()), 1);
}

void BM_ClosureSqrt2(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const GeneratorTriple t = sqrt2_triple();
  const ResidueRing ring(sqrt2(), p);
  std::vector<ResidueMat> gens;
  for (const auto& g : t.gens) gens.push_back(reduce_mod(g.matrix, ring));
  ClosureOptions opt;
  opt.ambient = ambient_order(ring, 2).order;
  for (auto _ : state) {
    const ClosureResult r = closure(ring, gens, opt);
    benchmark::DoNotOptimize(r.elements_visited);
    state.counters["order"] = static_cast<double>(r.elements_visited);
  }
}
BENCHMARK(BM_ClosureSqrt2)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_ClosureSL3(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const ResidueRing ring(rational_field(), p);
  const auto gens = elementary_generating_set(3);
  for (auto _ : state) benchmark::DoNotOptimize(closure(ring, gens).elements_visited);
}
BENCHMARK(BM_ClosureSL3)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_AmbientEnumeration(benchmark::State& state) {
  const ResidueRing ring(rational_field(), static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_sl_order(ring, 2));
}
BENCHMARK(BM_AmbientEnumeration)->Arg(5)->Arg(7)->Arg(13);

void BM_SubringIndex(benchmark::State& state) {
  const FieldPtr k = sqrt2();
  const FieldElement theta = k->one() + k->generator();
  for (auto _ : state) benchmark::DoNotOptimize(subring_index(theta, state.range(0)));
}
BENCHMARK(BM_SubringIndex)->Arg(1)->Arg(12)->Arg(48);

void BM_ElementaryWords(benchmark::State& state) {
  const FieldPtr k = sqrt2();
  const GeneratorTriple t = sqrt2_triple();
  const ThetaCertificate tc = select_theta(*k, UnitSource::pell());
  for (auto _ : state)
    benchmark::DoNotOptimize(elementary_words(tc.theta, t.get("U+"), 1, integral_basis_elements(k)).N);
}
BENCHMARK(BM_ElementaryWords);

}  // namespace

BENCHMARK_MAIN();
