#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "alignability/aligner.hpp"

namespace {

using namespace alignability;

// dictionary-style bitext; sizes chosen so a sweep dominates setup
std::pair<TokenisedCorpus, TokenisedCorpus> make_bitext(size_t sentences, size_t vocab,
                                                        size_t max_len) {
    std::mt19937_64 rng(42);
    TokenisedCorpus src, tgt;
    for (size_t s = 0; s < sentences; ++s) {
        size_t len = 3 + rng() % (max_len - 2);
        std::vector<std::string> a, b;
        for (size_t i = 0; i < len; ++i) {
            size_t w = rng() % vocab;
            a.push_back("s" + std::to_string(w));
            b.push_back("t" + std::to_string(w));
        }
        src.sentences.push_back(a);
        tgt.sentences.push_back(b);
    }
    return {src, tgt};
}

void BM_GibbsSweepLexical(benchmark::State& state) {
    auto [src, tgt] = make_bitext(static_cast<size_t>(state.range(0)), 200, 12);
    AlignerConfig cfg;
    cfg.seed = 7;
    GibbsAligner aligner(src, tgt, cfg);
    aligner.init_random();
    aligner.set_hmm_phase(false);
    for (auto _ : state) aligner.sweep();
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GibbsSweepLexical)->Arg(500)->Arg(2000);

void BM_GibbsSweepHmm(benchmark::State& state) {
    auto [src, tgt] = make_bitext(static_cast<size_t>(state.range(0)), 200, 12);
    AlignerConfig cfg;
    cfg.seed = 7;
    GibbsAligner aligner(src, tgt, cfg);
    aligner.init_random();
    aligner.set_hmm_phase(true);
    for (auto _ : state) aligner.sweep();
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GibbsSweepHmm)->Arg(500)->Arg(2000);

}  // namespace
