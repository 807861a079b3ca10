#include <benchmark/benchmark.h>

#include "ar3/model.hpp"
#include "ar3/rng.hpp"
#include "ar3/testsets.hpp"

namespace {

ar3::QuarticModel make(ar3::SetKind kind, int n) {
  return ar3::generate(ar3::standard_spec(kind, n, 7u, 4));
}

void BM_evaluate_dense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ar3::QuarticModel m = make(ar3::SetKind::full, n);
  ar3::Rng rng(1);
  const ar3::Vector s = rng.normal_vector(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ar3::evaluate(m, s, 2));
  }
}
BENCHMARK(BM_evaluate_dense)->Arg(25)->Arg(50)->Arg(100);

void BM_evaluate_diagonal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ar3::QuarticModel m = make(ar3::SetKind::diagonal, n);
  ar3::Rng rng(1);
  const ar3::Vector s = rng.normal_vector(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ar3::evaluate(m, s, 2));
  }
}
BENCHMARK(BM_evaluate_diagonal)->Arg(25)->Arg(50)->Arg(100)->Arg(400);

void BM_evaluate_lowrank(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ar3::QuarticModel m = make(ar3::SetKind::lowrank, n);
  ar3::Rng rng(1);
  const ar3::Vector s = rng.normal_vector(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ar3::evaluate(m, s, 2));
  }
}
BENCHMARK(BM_evaluate_lowrank)->Arg(25)->Arg(50)->Arg(100)->Arg(400);

}  // namespace
