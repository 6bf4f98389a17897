#include <benchmark/benchmark.h>

#include "grouptensor/matching.hpp"
#include "grouptensor/report.hpp"
#include "grouptensor/slicerank.hpp"

using namespace grouptensor;

namespace {

void BM_exact_matching(benchmark::State& state) {
  Group g = Group::cyclic(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_max_matching(g).m);
}
BENCHMARK(BM_exact_matching)->Arg(8)->Arg(12)->Arg(16);

void BM_heuristic_matching(benchmark::State& state) {
  Group g = Group::psl2(5);
  std::uint32_t iters = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(heuristic_matching(g, 1, iters).size());
}
BENCHMARK(BM_heuristic_matching)->Arg(2000)->Arg(20000);

void BM_exact_slice_rank(benchmark::State& state) {
  Tensor3 t = build_group_tensor(Group::cyclic(static_cast<std::uint64_t>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(exact_slice_rank(t).value);
}
BENCHMARK(BM_exact_slice_rank)->Arg(2)->Arg(3)->Arg(4);

void BM_gap_scan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gap_eval(99991).sr_lb);
}
BENCHMARK(BM_gap_scan);

}  // namespace
