#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "alignability/tokenise.hpp"

namespace {

using namespace alignability;

std::vector<std::string> make_text(size_t lines) {
    std::mt19937_64 rng(13);
    const char* syllables[] = {"ka", "to", "mi", "ra", "su", "ne", "ol", "ba"};
    std::vector<std::string> out;
    for (size_t i = 0; i < lines; ++i) {
        std::string line;
        size_t words = 4 + rng() % 8;
        for (size_t w = 0; w < words; ++w) {
            if (w) line += ' ';
            size_t parts = 1 + rng() % 4;
            for (size_t p = 0; p < parts; ++p) line += syllables[rng() % 8];
        }
        out.push_back(line);
    }
    return out;
}

void BM_BpeEncode(benchmark::State& state) {
    std::vector<std::string> text = make_text(200);
    BpeModel model = train_bpe(text, 120);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bpe_encode(model, text[i % text.size()]));
        ++i;
    }
}
BENCHMARK(BM_BpeEncode);

void BM_UnigramEncode(benchmark::State& state) {
    std::vector<std::string> text = make_text(200);
    UnigramModel model;
    const char* syllables[] = {"ka", "to", "mi", "ra", "su", "ne", "ol", "ba"};
    for (const char* s : syllables) {
        model.entries[s] = -3.0;
        model.entries[std::string(" ") + s] = -3.0;
    }
    for (char c = 'a'; c <= 'z'; ++c) model.entries[std::string(1, c)] = -8.0;
    model.entries[" "] = -8.0;
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(unigram_encode(model, text[i % text.size()]));
        ++i;
    }
}
BENCHMARK(BM_UnigramEncode);

void BM_TrainBpe(benchmark::State& state) {
    std::vector<std::string> text = make_text(static_cast<size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(train_bpe(text, 200));
}
BENCHMARK(BM_TrainBpe)->Arg(200)->Arg(1000);

}  // namespace
