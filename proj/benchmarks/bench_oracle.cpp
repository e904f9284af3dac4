#include <benchmark/benchmark.h>

#include "galrep/oracle.hpp"

using namespace galrep;

namespace {

Prime qp(long long p) { return make_prime(BaseField::Rationals, GInt{p}); }

void BM_point_count_10007(benchmark::State& state) {
  std::array<long long, 5> c{0, 0, 0, -1369, 0};
  for (auto _ : state) benchmark::DoNotOptimize(ec_trace_of_frobenius(c, 10007));
}
BENCHMARK(BM_point_count_10007);

void BM_synthetic_query(benchmark::State& state) {
  SelmerBasis basis =
      unramified_subgroup(selmer_group(BaseField::Rationals, {qp(2), qp(37)}));
  auto d = make_discriminant(basis, resolve_in_basis(basis, GInt{-74}));
  auto o = make_synthetic_oracle(basis, d, d);
  Prime p = qp(1000003);
  for (auto _ : state) benchmark::DoNotOptimize(o->query(p));
}
BENCHMARK(BM_synthetic_query);

}  // namespace
