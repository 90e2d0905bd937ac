#include <benchmark/benchmark.h>

#include "scrf/attack.hpp"
#include "scrf/corruption.hpp"
#include "scrf/hardening.hpp"
#include "scrf/reach.hpp"
#include "scrf/sweep.hpp"

using namespace scrf;

static void BM_TruthTableParity(benchmark::State& state) {
  const auto f = parity_formula(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(truth_table(f));
}
BENCHMARK(BM_TruthTableParity)->Arg(8)->Arg(12)->Arg(16);

static void BM_VerifyResilience(benchmark::State& state) {
  const auto f = parity_formula(static_cast<std::uint32_t>(state.range(0)));
  const auto table = truth_table(f);
  const PathCaps caps{1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(verify_resilience(f, table, caps, VerifyMode::exhaustive()).ok);
}
BENCHMARK(BM_VerifyResilience)->Arg(2)->Arg(3)->Arg(4);

template <Scheme S>
static void BM_Simulate(benchmark::State& state) {
  const auto len = static_cast<std::uint32_t>(state.range(0));
  const auto eps = S == Scheme::large ? Rational(1, 10) : Rational(1, 20);
  auto config = S == Scheme::large ? SimConfig::large(eps) : SimConfig::small(eps);
  config.instrument = state.range(1) != 0;
  HashedAlternatingProtocol pi0(len, 42);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const auto seed = derive_seed(7, trial++);
    if constexpr (S == Scheme::large) {
      auto adv = make_adversary<LargeSymbol>(AdversarySpec::parse("chain_forker"), seed);
      benchmark::DoNotOptimize(simulate_large(config, pi0, seed & 0xff, seed >> 8 & 0xff, *adv).n);
    } else {
      auto adv = make_adversary<SmallSymbol>(AdversarySpec::parse("chain_forker"), seed,
                                             SymbolTraits<SmallSymbol>{fragment_base(eps)});
      benchmark::DoNotOptimize(simulate_small(config, pi0, seed & 0xff, seed >> 8 & 0xff, *adv).n);
    }
  }
  state.counters["rounds"] = config.round_count(len);
  state.SetItemsProcessed(state.iterations() * config.round_count(len));
}
BENCHMARK(BM_Simulate<Scheme::large>)->Args({6, 1})->Args({20, 0})->Args({100, 0});
BENCHMARK(BM_Simulate<Scheme::small>)->Args({6, 1})->Args({20, 0})->Args({100, 0});

static void BM_ReachAllNodes(benchmark::State& state) {
  SyntheticScheme s(3, 3, 3, 3);
  const auto inputs = s.inputs();
  const auto nodes = all_nodes(s);
  const NoiseBudget budget{{1, 1}};
  for (auto _ : state)
    for (const auto& v : nodes) benchmark::DoNotOptimize(reach(s, v, budget, inputs));
}
BENCHMARK(BM_ReachAllNodes);

static void BM_BisectionAttack(benchmark::State& state) {
  const auto p = std::make_shared<PaddedProtocol>(std::make_shared<BisectionParityProtocol>(12), 10);
  for (auto _ : state) {
    const auto plan = build_attack(*p, find_confusable_inputs(*p, 1));
    benchmark::DoNotOptimize(execute_attack(*p, plan).succeeded());
  }
}
BENCHMARK(BM_BisectionAttack)->Unit(benchmark::kMillisecond);

static void BM_Harden(benchmark::State& state) {
  HardenOptions options;
  options.try_materialize = false;
  const auto f = parity_formula(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(harden(f, Rational(1, 20), options).accounting.rounds);
}
BENCHMARK(BM_Harden)->Arg(4)->Arg(8);
BENCHMARK_MAIN();
