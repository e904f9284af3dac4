#include <benchmark/benchmark.h>

#include <random>

#include "galrep/f2.hpp"

using namespace galrep;

namespace {

f2::BitMatrix random_invertible(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  f2::BitMatrix m(n, n);
  do {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.row(i).set(j, rng() & 1);
  } while (f2::rank(m) != n);
  return m;
}

void BM_invert_64(benchmark::State& state) {
  f2::BitMatrix m = random_invertible(64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(f2::invert(m));
}
BENCHMARK(BM_invert_64);

void BM_rank_36(benchmark::State& state) {
  std::mt19937_64 rng(2);
  f2::BitMatrix m(36, 36);
  for (int i = 0; i < 36; ++i)
    for (int j = 0; j < 36; ++j) m.row(i).set(j, rng() & 1);
  for (auto _ : state) benchmark::DoNotOptimize(f2::rank(m));
}
BENCHMARK(BM_rank_36);

}  // namespace
