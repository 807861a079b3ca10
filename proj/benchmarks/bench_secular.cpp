#include <benchmark/benchmark.h>

#include "ar3/secular.hpp"
#include "ar3/testsets.hpp"

namespace {

void BM_secular_diagonal_set(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ar3::QuarticModel m =
      ar3::generate(ar3::standard_spec(ar3::SetKind::diagonal, n, 11u));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ar3::secular_solve(m.H, m.g, m.T, m.sigma, m.W));
  }
}
BENCHMARK(BM_secular_diagonal_set)->Arg(50)->Arg(100)->Arg(200)->Arg(400)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
