// Serial reference vs OpenMP kernels: oracle enumeration and DP layer
// expansion, on fixed seeded instances.

#include <benchmark/benchmark.h>

#include "eqmanna/instances.hpp"
#include "eqmanna/oracle.hpp"
#include "eqmanna/welfare_dp.hpp"

using namespace eqmanna;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_OracleSatisfying(benchmark::State& state) {
  const Instance inst = generate(GeneratorSpec{Regime::arbitrary, 3, static_cast<int>(state.range(1)), 3, 11});
  OracleOptions opts;
  opts.execution = mode(state);
  const PropertyPredicate pred{Property::eqx};
  for (auto _ : state) benchmark::DoNotOptimize(satisfying_indices(inst, pred, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(allocation_count(inst)));
  label(state);
}

void BM_OracleParetoFrontier(benchmark::State& state) {
  const Instance inst = generate(GeneratorSpec{Regime::trivalued, 3, static_cast<int>(state.range(1)), 1, 5});
  OracleOptions opts;
  opts.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(pareto_frontier(inst, opts));
  label(state);
}

void BM_WelfareDp(benchmark::State& state) {
  const Instance inst = generate(GeneratorSpec{Regime::arbitrary, 3, static_cast<int>(state.range(1)), 3, 7});
  DpOptions opts;
  opts.execution = mode(state);
  opts.state_ceiling = 1e30L;
  std::size_t states = 0;
  for (auto _ : state) {
    const DpResult r = dp_welfare_eqx(inst, Objective::utilitarian, opts);
    states = r.stats.total_states;
    benchmark::DoNotOptimize(r.optimum);
  }
  state.counters["states"] = static_cast<double>(states);
  label(state);
}

}  // namespace

BENCHMARK(BM_OracleSatisfying)->ArgsProduct({{0, 1}, {8, 10, 12}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParetoFrontier)->ArgsProduct({{0, 1}, {8, 10}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WelfareDp)->ArgsProduct({{0, 1}, {8, 10, 12}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
