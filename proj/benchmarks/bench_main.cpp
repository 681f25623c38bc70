#include <benchmark/benchmark.h>

#include "frobkit/distribution.hpp"
#include "frobkit/verify.hpp"
#include "test_support.hpp"

using namespace frobkit;
namespace ft = frobkit::testing;

namespace {

void BM_Wedge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ft::Rng rng(1);
  const auto a = ft::random_vector(rng, n, n / 2);
  const auto b = ft::random_vector(rng, n, n - n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_Star(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ft::Rng rng(2);
  const auto v = ft::random_vector(rng, n, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(star_vec(v));
}
BENCHMARK(BM_Star)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_StratifyContact(benchmark::State& state) {
  const Box box = Box::cube(3, 0, 1);
  const Frame f({KVectorField(1, {1.0, 0.0, 0.0}, box),
                 KVectorField(1, {0.0, 1.0, Expr::variable(0)}, box)});
  const int g = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stratify(f, GridSpec{box, g}, kDefaultRankTolerance, 1));
  }
  state.SetItemsProcessed(state.iterations() * g * g * g);
}
BENCHMARK(BM_StratifyContact)->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_LebesguePair(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const Scenario s = zworski_scenario(res);
  const auto fs = bump_ensemble(s.form_box, s.form_box, 2, EnsembleSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(pair(s.current, fs.front(), 1));
  state.SetItemsProcessed(state.iterations() * res * res * res);
}
BENCHMARK(BM_LebesguePair)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BoundaryPair(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const Scenario s = zworski_scenario(res);
  const auto fs = bump_ensemble(s.form_box, s.form_box, 1, EnsembleSpec{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary_pair(s.current, fs.front(), 1));
  }
}
BENCHMARK(BM_BoundaryPair)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
