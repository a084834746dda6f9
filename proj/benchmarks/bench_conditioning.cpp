#include <benchmark/benchmark.h>

#include <filtlab/generators.hpp>

using namespace filtlab;

namespace {

FilteredSpace bench_space(int atoms, int horizon) {
  gen::Rng rng(42);
  gen::SpaceOptions opts;
  opts.min_atoms = opts.max_atoms = atoms;
  opts.min_horizon = opts.max_horizon = horizon;
  return gen::space(rng, opts);
}

}  // namespace

static void BM_CondExpect(benchmark::State& state) {
  const FilteredSpace sp = bench_space(static_cast<int>(state.range(0)), 4);
  gen::Rng rng(7);
  RandomVariable x = RandomVariable::constant(sp.n_atoms(), Rational());
  for (int a = 0; a < sp.n_atoms(); ++a) x[a] = rng.rat_in(-3, 3);
  for (auto _ : state) {
    for (int t = 0; t <= sp.horizon(); ++t)
      benchmark::DoNotOptimize(cond_expect(sp, x, t));
  }
}
BENCHMARK(BM_CondExpect)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_ConditionalDistribution(benchmark::State& state) {
  const FilteredSpace sp = bench_space(static_cast<int>(state.range(0)), 4);
  gen::Rng rng(11);
  const RandomTime tau = gen::random_time(rng, sp);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditional_distribution(sp, tau));
  }
}
BENCHMARK(BM_ConditionalDistribution)->Arg(8)->Arg(16)->Arg(32);

static void BM_HypothesisHP(benchmark::State& state) {
  const FilteredSpace sp = bench_space(static_cast<int>(state.range(0)), 4);
  gen::Rng rng(13);
  const RandomTime tau = gen::random_time(rng, sp);
  const CondDistField field = conditional_distribution(sp, tau);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_hp(sp, field));
  }
}
BENCHMARK(BM_HypothesisHP)->Arg(8)->Arg(16)->Arg(32);
