#include <benchmark/benchmark.h>

#include "galrep/base_field.hpp"

using namespace galrep;

namespace {

void BM_symbol_euler_q(benchmark::State& state) {
  Prime p = make_prime(BaseField::Rationals, GInt{99991});
  for (auto _ : state) benchmark::DoNotOptimize(splitting_symbol(GInt{-74}, p));
}
BENCHMARK(BM_symbol_euler_q);

Prime first_prime_with(int degree, long long min_norm) {
  PrimeStream s(BaseField::GaussianRationals);
  for (;;) {
    Prime p = s.next();
    if (p.degree == degree && p.norm >= min_norm) return p;
  }
}

void BM_symbol_split_qi(benchmark::State& state) {
  Prime p = first_prime_with(1, 100000);
  for (auto _ : state) benchmark::DoNotOptimize(splitting_symbol(GInt{11, 6}, p));
}
BENCHMARK(BM_symbol_split_qi);

void BM_symbol_inert_qi(benchmark::State& state) {
  Prime p = first_prime_with(2, 100000);
  for (auto _ : state) benchmark::DoNotOptimize(splitting_symbol(GInt{11, 6}, p));
}
BENCHMARK(BM_symbol_inert_qi);

void BM_factor_gaussian(benchmark::State& state) {
  GInt z = GInt{11, 6} * GInt{1, 2} * GInt{0, 1} * GInt{887, 0} * GInt{5, 4};
  for (auto _ : state) benchmark::DoNotOptimize(factor_gaussian(z));
}
BENCHMARK(BM_factor_gaussian);

void BM_prime_stream_qi(benchmark::State& state) {
  for (auto _ : state) {
    PrimeStream s(BaseField::GaussianRationals);
    Prime last{};
    for (int i = 0; i < 100; ++i) last = s.next();
    benchmark::DoNotOptimize(last);
  }
}
BENCHMARK(BM_prime_stream_qi);

}  // namespace
