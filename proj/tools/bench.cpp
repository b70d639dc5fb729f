// Parallel vs serial Brandt matrices.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "hv/quaternion.hpp"

using namespace hv;

namespace {

const ideal_class_set& classes(i64 p) {
    static std::map<i64, std::unique_ptr<ideal_class_set>> cache;
    auto& c = cache[p];
    if (!c) c = std::make_unique<ideal_class_set>(ideal_classes(maximal_order(build_algebra(p))));
    return *c;
}

void bm_brandt_parallel(benchmark::State& st) {
    const auto& C = classes(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(brandt_all(C, st.range(1)));
    st.counters["classes"] = C.h();
}

void bm_brandt_serial(benchmark::State& st) {
    const auto& C = classes(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(brandt_all_serial(C, st.range(1)));
    st.counters["classes"] = C.h();
}

}  // namespace

BENCHMARK(bm_brandt_parallel)->Args({37, 20})->Args({101, 20})->Args({197, 30})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_brandt_serial)->Args({37, 20})->Args({101, 20})->Args({197, 30})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
