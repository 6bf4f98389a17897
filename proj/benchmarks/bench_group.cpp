#include <benchmark/benchmark.h>

#include "grouptensor/conjugacy.hpp"
#include "grouptensor/group.hpp"
#include "grouptensor/modrep.hpp"

using namespace grouptensor;

namespace {

void BM_construct_psl2(benchmark::State& state) {
  std::uint32_t p = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Group::psl2(p).order());
}
BENCHMARK(BM_construct_psl2)->Arg(13)->Arg(23);

void BM_mul_index(benchmark::State& state) {
  Group g = Group::psl2(13);
  std::uint32_t n = static_cast<std::uint32_t>(g.order());
  std::uint32_t i = 1, j = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.mul_index(i, j));
    i = (i + 17) % n;
    j = (j + 289) % n;
  }
}
BENCHMARK(BM_mul_index);

void BM_conjugacy(benchmark::State& state) {
  Group g = Group::psl2(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(conjugacy_classes(g).classes.size());
}
BENCHMARK(BM_conjugacy)->Arg(13)->Arg(23);

void BM_semisimple_summary(benchmark::State& state) {
  Group g = Group::psl2(5);
  std::uint16_t ell = static_cast<std::uint16_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(semisimple_summary(g, ell, 1).dim_semisimple);
}
BENCHMARK(BM_semisimple_summary)->Arg(2)->Arg(5)->Arg(7);

void BM_trace_chain(benchmark::State& state) {
  Group g = Group::psl2(5);
  for (auto _ : state) benchmark::DoNotOptimize(radical_trace_chain(g, 2));
}
BENCHMARK(BM_trace_chain);

}  // namespace
