#include <benchmark/benchmark.h>

#include <vector>

#include "ssp/field.hpp"
#include "ssp/kernels.hpp"

using namespace ssp;

static std::vector<Fe> sample(const Field& K, int n) {
    Rng rng(1);
    std::vector<Fe> v;
    for (int i = 0; i < n; ++i) v.push_back(K.random(rng));
    return v;
}

static void BM_mul(benchmark::State& st) {
    const Field& K = Field::get(static_cast<u32>(st.range(0)), static_cast<int>(st.range(1)));
    auto v = sample(K, 1024);
    Fe acc = K.one();
    for (auto _ : st) {
        for (const Fe& x : v) acc *= x;
        benchmark::DoNotOptimize(acc);
    }
    st.SetItemsProcessed(st.iterations() * v.size());
}
BENCHMARK(BM_mul)->Args({13, 1})->Args({13, 2})->Args({5, 2})->Args({499, 2});

static void BM_inv(benchmark::State& st) {
    const Field& K = Field::get(static_cast<u32>(st.range(0)), 2);
    auto v = sample(K, 1024);
    for (auto& x : v)
        if (x.is_zero()) x = K.one();
    for (auto _ : st)
        for (const Fe& x : v) benchmark::DoNotOptimize(x.inv());
    st.SetItemsProcessed(st.iterations() * v.size());
}
BENCHMARK(BM_inv)->Arg(13)->Arg(499);

static void BM_hyper_chunk(benchmark::State& st) {
    const Field& K = Field::get(11);
    HyperScan scan(4, K);
    u64 c = 1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(scan.run(c));
        c = c % (scan.chunks() - 1) + 1;
    }
}
BENCHMARK(BM_hyper_chunk)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
