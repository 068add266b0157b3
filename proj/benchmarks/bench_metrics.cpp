#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "alignability/analysis.hpp"
#include "alignability/metrics.hpp"

namespace {

using namespace alignability;

TokenDistribution make_distribution(size_t support, uint64_t seed) {
    std::mt19937_64 rng(seed);
    TokenDistribution d;
    double total = 0.0;
    for (size_t i = 0; i < support; ++i) {
        double w = 1.0 + static_cast<double>(rng() % 1000);
        d.probs["tok" + std::to_string(i)] = w;
        total += w;
    }
    for (auto& [tok, p] : d.probs) p /= total;
    return d;
}

void BM_Jsd(benchmark::State& state) {
    TokenDistribution p = make_distribution(static_cast<size_t>(state.range(0)), 1);
    TokenDistribution q = make_distribution(static_cast<size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(jsd(p, q));
}
BENCHMARK(BM_Jsd)->Arg(1000)->Arg(30000);

void BM_Spearman(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::vector<double> x, y;
    for (int i = 0; i < state.range(0); ++i) {
        x.push_back(static_cast<double>(rng() % 1000));
        y.push_back(static_cast<double>(rng() % 1000));
    }
    for (auto _ : state) benchmark::DoNotOptimize(spearman(x, y));
}
BENCHMARK(BM_Spearman)->Arg(100)->Arg(10000);

}  // namespace
