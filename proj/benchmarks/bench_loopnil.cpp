#include <benchmark/benchmark.h>

#include <sstream>

#include "loopnil/nilpotence.hpp"
#include "loopnil/parse.hpp"
#include "loopnil/supernil.hpp"

using namespace loopnil;

namespace {

Loop load(const char* name) {
  return parse_cayley_file(std::string(LOOPNIL_DATA_DIR) + "/" + name).at(0);
}

void BM_ParseCayley(benchmark::State& state) {
  const std::string text = format_cayley(load("z3xd4.txt"));
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_cayley(in));
  }
}
BENCHMARK(BM_ParseCayley);

void BM_InnerGenerators(benchmark::State& state) {
  const Loop q = load("z3xd4.txt");
  for (auto _ : state) benchmark::DoNotOptimize(q.inner_generators());
}
BENCHMARK(BM_InnerGenerators);

void BM_MltEnumeration(benchmark::State& state) {
  const Loop q = load("z3xd4.txt");
  for (auto _ : state) benchmark::DoNotOptimize(mlt(q).order());
}
BENCHMARK(BM_MltEnumeration);

void BM_UpperCentralSeries(benchmark::State& state) {
  const Loop q = load("d4.txt");
  for (auto _ : state) benchmark::DoNotOptimize(upper_central_series(q).cls);
}
BENCHMARK(BM_UpperCentralSeries);

void BM_ForkSearchFindsFork(benchmark::State& state) {
  const Loop q = load("ex6.txt");
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fork_search(q, k).status);
}
BENCHMARK(BM_ForkSearchFindsFork)->Arg(1)->Arg(2);

void BM_ForkSearchComplete(benchmark::State& state) {
  // complete fork-free closures: Z4 at k=1 (64 tuples), Z8 at k=1 (512),
  // Z4 at k=2 (256)
  const Loop q = state.range(0) == 4 ? load("z4.txt") : load("z8.txt");
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fork_search(q, k).closure_size);
}
BENCHMARK(BM_ForkSearchComplete)->Args({4, 1})->Args({8, 1})->Args({4, 2});

}  // namespace

BENCHMARK_MAIN();
