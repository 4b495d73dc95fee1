#include <benchmark/benchmark.h>

#include "tailcop/gaussian.hpp"
#include "tailcop/models.hpp"
#include "tailcop/processes.hpp"
#include "tailcop/tailtest.hpp"

namespace {

const tailcop::Sample& fixture_sample(std::int64_t n) {
  static auto* cache = new std::map<std::int64_t, tailcop::Sample>();
  auto it = cache->find(n);
  if (it == cache->end()) {
    it = cache->emplace(n, tailcop::sample_pairs(tailcop::make_independence(),
                                                 n, 42))
             .first;
  }
  return it->second;
}

void BM_BuildSample(benchmark::State& state) {
  const auto pairs = tailcop::generate_pairs(tailcop::make_independence(),
                                             state.range(0), 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tailcop::build_sample(pairs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildSample)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_EmpiricalCopula(benchmark::State& state) {
  const auto& s = fixture_sample(state.range(0));
  double u = 0.0;
  for (auto _ : state) {
    u += 1e-4;
    if (u > 1.0) u = 1e-4;
    benchmark::DoNotOptimize(tailcop::empirical_copula(s, u, 1.0 - u));
  }
}
BENCHMARK(BM_EmpiricalCopula)->Arg(1 << 12)->Arg(1 << 16);

void BM_SupApproximationGap(benchmark::State& state) {
  const auto& s = fixture_sample(state.range(0));
  const tailcop::TailContext ctx(state.range(0), 0.5 * state.range(0), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tailcop::sup_approximation_gap(s, ctx, nullptr, 128, 1024));
  }
}
BENCHMARK(BM_SupApproximationGap)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_OmegaStatistic(benchmark::State& state) {
  const auto& s = fixture_sample(state.range(0));
  const tailcop::TailContext ctx(state.range(0), state.range(0), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tailcop::omega_statistic(s, ctx, 0.0, 0.0));
  }
}
BENCHMARK(BM_OmegaStatistic)->Arg(1 << 8)->Arg(1 << 10)->Arg(1 << 12);

void BM_SimulateTiedDown(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto sheet = tailcop::simulate_sheet(static_cast<int>(state.range(0)),
                                               ++seed);
    benchmark::DoNotOptimize(
        tailcop::bridge_to_tied_down(tailcop::sheet_to_bridge(sheet)));
  }
}
BENCHMARK(BM_SimulateTiedDown)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
