#include <benchmark/benchmark.h>

#include <filtlab/decomposition.hpp>
#include <filtlab/generators.hpp>

using namespace filtlab;

static void BM_JeulinYor(benchmark::State& state) {
  gen::Rng rng(3);
  gen::SpaceOptions opts;
  opts.min_atoms = opts.max_atoms = static_cast<int>(state.range(0));
  opts.min_horizon = opts.max_horizon = 4;
  const FilteredSpace sp = gen::space(rng, opts);
  const RandomTime tau = gen::random_time(rng, sp);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compensator_g_jeulin_yor(sp, tau));
  }
}
BENCHMARK(BM_JeulinYor)->Arg(8)->Arg(16)->Arg(32);

static void BM_StoppedDecomposition(benchmark::State& state) {
  gen::Rng rng(5);
  gen::SpaceOptions opts;
  opts.min_atoms = opts.max_atoms = static_cast<int>(state.range(0));
  opts.min_horizon = opts.max_horizon = 4;
  const FilteredSpace sp = gen::space(rng, opts);
  const RandomTime tau = gen::random_time(rng, sp);
  const Process u = gen::martingale(rng, sp);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        decompose_stopped(sp, tau, u, DecompositionVariant::StoppedPredictable));
  }
}
BENCHMARK(BM_StoppedDecomposition)->Arg(8)->Arg(16)->Arg(32);

static void BM_PseudoHonestDecomposition(benchmark::State& state) {
  gen::Rng rng(static_cast<std::uint64_t>(state.range(0)));
  const gen::Fixture fx = gen::pred_mult_fixture(rng);
  const Process u = gen::martingale(rng, fx.space);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose_pseudo_honest(fx.space, fx.field, fx.tau, u));
  }
}
BENCHMARK(BM_PseudoHonestDecomposition)->Arg(1)->Arg(2);

static void BM_CanonicalExtension(benchmark::State& state) {
  gen::Rng rng(9);
  gen::SpaceOptions opts;
  opts.min_atoms = opts.max_atoms = static_cast<int>(state.range(0));
  opts.min_horizon = opts.max_horizon = 3;
  const FilteredSpace sp = gen::space(rng, opts);
  const Process f = gen::azema_submartingale(rng, sp, true);
  const MultiplicativeSystem system = predictable_multiplicative_system(sp, f);
  const CondDistField field = field_from_system(sp, f, system);
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_extension(sp, field));
  }
}
BENCHMARK(BM_CanonicalExtension)->Arg(4)->Arg(8);
