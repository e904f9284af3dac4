#include <benchmark/benchmark.h>

#include "galrep/test_sets.hpp"

using namespace galrep;

namespace {

Prime qp(long long p) { return make_prime(BaseField::Rationals, GInt{p}); }

void BM_find_T2_special_q(benchmark::State& state) {
  SelmerBasis basis =
      unramified_subgroup(selmer_group(BaseField::Rationals, {qp(2), qp(37)}));
  for (auto _ : state) benchmark::DoNotOptimize(find_T2_special(basis));
}
BENCHMARK(BM_find_T2_special_q);

void BM_find_T2_special_qi(benchmark::State& state) {
  SelmerBasis basis = unramified_subgroup(selmer_group(
      BaseField::GaussianRationals,
      {make_prime(BaseField::GaussianRationals, GInt{1, 1}),
       make_prime(BaseField::GaussianRationals, GInt{1, 2}),
       make_prime(BaseField::GaussianRationals, GInt{11, 6})}));
  SearchOptions opt;
  opt.degree1_only = true;
  for (auto _ : state) benchmark::DoNotOptimize(find_T2_special(basis, opt));
}
BENCHMARK(BM_find_T2_special_qi);

}  // namespace
