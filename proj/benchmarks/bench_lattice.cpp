#include <benchmark/benchmark.h>

#include "omlattice/greechie.hpp"
#include "omlattice/lattice.hpp"

namespace {

const char* k13_7 = "123,345,567,789,9AB,BC1,AD4.";

void bm_parse(benchmark::State& state) {
  for (auto _ : state) {
    auto d = oml::parse(k13_7);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_parse);

void bm_build_13_7(benchmark::State& state) {
  auto d = oml::parse(k13_7);
  for (auto _ : state) {
    auto L = oml::build(d);
    benchmark::DoNotOptimize(L);
  }
}
BENCHMARK(bm_build_13_7);

void bm_table_lookups(benchmark::State& state) {
  auto L = oml::build(oml::parse(k13_7));
  int x = 1;
  for (auto _ : state) {
    x = L.join(x, L.ortho(L.meet(x, 7)));
    benchmark::DoNotOptimize(x);
    x = (x + 1) % L.size();
  }
}
BENCHMARK(bm_table_lookups);

}  // namespace

BENCHMARK_MAIN();
