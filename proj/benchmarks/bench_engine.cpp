#include <benchmark/benchmark.h>

#include "tagforge/enumeration.hpp"
#include "tagforge/fast_engine.hpp"
#include "tagforge/halting.hpp"
#include "tagforge/zoo.hpp"

using namespace tagforge;

namespace {

// 15:30074:0 stays long (thousands of bits) for its first 3.5e8 steps.
void BM_EvolveFast(benchmark::State& state) {
  const auto start = parse_state_id("15:30074:0");
  const auto warm = evolve_fast(start, 50'000'000).state;
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto r = evolve_fast(warm, n);
    benchmark::DoNotOptimize(r.steps);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_EvolveFast)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);

void BM_SingleStep(benchmark::State& state) {
  const auto warm = evolve_fast(parse_state_id("15:30074:0"), 50'000'000).state;
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    CompressedState c = warm;
    for (std::uint64_t k = 0; k < n; ++k) step_compressed_inplace(c);
    benchmark::DoNotOptimize(c.phase);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SingleStep)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_DetectHalt(benchmark::State& state) {
  const auto start = parse_state_id("12:3962:0");
  for (auto _ : state) {
    auto r = detect_halt_or_throw(start, 1'000'000);
    benchmark::DoNotOptimize(r.halting_step);
  }
}
BENCHMARK(BM_DetectHalt)->Unit(benchmark::kMillisecond);

void BM_SearchWinners(benchmark::State& state) {
  SearchOptions opt;
  opt.threads = 1;
  for (auto _ : state) {
    auto r = search_winners(static_cast<std::size_t>(state.range(0)), 1'000'000, opt);
    benchmark::DoNotOptimize(r.winners.size());
  }
}
BENCHMARK(BM_SearchWinners)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_ZooBlockRule(benchmark::State& state) {
  const auto rule = parse_rule("r=2 00:0 10:101 01:000 11:011");
  const auto ic = parse_zoo_state("8:175", 2);
  for (auto _ : state) {
    auto r = zoo_detect_halt(rule, ic, 1'000'000);
    benchmark::DoNotOptimize(r.index());
  }
}
BENCHMARK(BM_ZooBlockRule)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
