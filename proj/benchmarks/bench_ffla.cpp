#include <benchmark/benchmark.h>

#include <random>

#include "grouptensor/ffla.hpp"

using namespace grouptensor;

namespace {

FFMatrix random_matrix(std::uint32_t n, std::uint16_t ell, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FFMatrix m(n, n, ell);
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t c = 0; c < n; ++c) m.set(r, c, static_cast<Fel>(rng() % ell));
  return m;
}

void BM_rref(benchmark::State& state) {
  std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  std::uint16_t ell = static_cast<std::uint16_t>(state.range(1));
  FFMatrix m = random_matrix(n, ell, 7);
  for (auto _ : state) benchmark::DoNotOptimize(rref(m).rank);
}
BENCHMARK(BM_rref)->Args({256, 2})->Args({512, 2})->Args({256, 7})->Args({512, 7});

void BM_mul(benchmark::State& state) {
  std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  std::uint16_t ell = static_cast<std::uint16_t>(state.range(1));
  FFMatrix a = random_matrix(n, ell, 11);
  FFMatrix b = random_matrix(n, ell, 13);
  for (auto _ : state) benchmark::DoNotOptimize(a.mul(b).rows());
}
BENCHMARK(BM_mul)->Args({256, 2})->Args({512, 2})->Args({256, 7})->Args({512, 7});

void BM_kernel(benchmark::State& state) {
  std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  FFMatrix m = random_matrix(n, 3, 17);
  // force some nullity
  for (std::uint32_t c = 0; c < n; ++c) m.set(n - 1, c, m.get(0, c));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_basis(m).rows());
}
BENCHMARK(BM_kernel)->Arg(256)->Arg(512);

}  // namespace
