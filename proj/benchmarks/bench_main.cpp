#include <benchmark/benchmark.h>

#include "sszd/directions.hpp"
#include "sszd/oracle.hpp"
#include "sszd/sszd.hpp"
#include "sszd/testbed.hpp"

namespace {

using namespace sszd;

void BM_Coordinate(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto l = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(make_coordinate(d, l, rng));
}
BENCHMARK(BM_Coordinate)->Args({100, 1})->Args({100, 50})->Args({100, 100});

void BM_Spherical(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto l = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(make_spherical(d, l, rng));
}
BENCHMARK(BM_Spherical)->Args({100, 1})->Args({100, 50})->Args({100, 100});

void BM_FiniteDifferences(benchmark::State& state) {
  const std::size_t d = 100;
  const auto l = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const auto f1 = make_f1(d, rng);
  const Vector x = f1->initial_point();
  const auto p = make_spherical(d, l, rng);
  const auto z = f1->sample_noise(rng);
  EvalCounter counter;
  for (auto _ : state) benchmark::DoNotOptimize(finite_differences(*f1, x, z, p, 1e-7, counter));
}
BENCHMARK(BM_FiniteDifferences)->Arg(1)->Arg(50)->Arg(100);

void BM_SszdStep(benchmark::State& state) {
  const std::size_t d = 100;
  const auto l = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const auto f1 = make_f1(d, rng);
  const Schedule schedule = Schedule::synthetic(d, l);
  OptimizerState s = OptimizerState::start(f1->initial_point());
  EvalCounter counter;
  for (auto _ : state) {
    s = sszd_step(s, *f1, DirectionKind::Spherical, l, schedule, rng, counter);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_SszdStep)->Arg(1)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
