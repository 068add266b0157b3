#pragma once

// Synthetic deterministic-dictionary bitexts with known gold alignments,
// shared by the aligner tests and the acceptance suite.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "alignability/tokenise.hpp"

struct SyntheticBitext {
    alignability::TokenisedCorpus src;
    alignability::TokenisedCorpus tgt;
    std::vector<std::vector<std::pair<int, int>>> gold;  // sorted (src,tgt) links
};

// Source words are drawn without replacement; the target is the dictionary
// image with local reordering (block rotations, displacement <= window) and
// optional lexical noise.
inline SyntheticBitext make_dictionary_bitext(size_t sentences, size_t vocab, size_t min_len,
                                              size_t max_len, int window, double noise,
                                              uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](size_t n) { return static_cast<size_t>(rng() % n); };

    SyntheticBitext bitext;
    bitext.src.lang = "sx";
    bitext.tgt.lang = "tx";
    for (size_t s = 0; s < sentences; ++s) {
        size_t len = min_len + uniform(max_len - min_len + 1);
        std::vector<size_t> ids;
        std::vector<bool> used(vocab, false);
        while (ids.size() < len) {
            size_t w = uniform(vocab);
            if (used[w]) continue;
            used[w] = true;
            ids.push_back(w);
        }
        // permutation with bounded displacement: rotate small blocks
        std::vector<size_t> perm(len);
        for (size_t i = 0; i < len; ++i) perm[i] = i;
        if (window > 0) {
            size_t pos = 0;
            while (pos + 1 < len) {
                size_t max_block = std::min<size_t>(static_cast<size_t>(window) + 1, len - pos);
                size_t block = 1 + uniform(max_block);
                if (block > 1) std::rotate(perm.begin() + pos, perm.begin() + pos + 1,
                                           perm.begin() + pos + block);
                pos += block;
            }
        }

        std::vector<std::string> src_sent(len), tgt_sent(len);
        std::vector<std::pair<int, int>> gold;
        for (size_t i = 0; i < len; ++i) src_sent[i] = "s" + std::to_string(ids[i]);
        for (size_t j = 0; j < len; ++j) {
            size_t src_pos = perm[j];
            size_t w = ids[src_pos];
            if (noise > 0 && static_cast<double>(rng() >> 11) * 0x1.0p-53 < noise)
                w = uniform(vocab);
            tgt_sent[j] = "t" + std::to_string(w);
            gold.emplace_back(static_cast<int>(src_pos), static_cast<int>(j));
        }
        std::sort(gold.begin(), gold.end());
        bitext.src.sentences.push_back(std::move(src_sent));
        bitext.tgt.sentences.push_back(std::move(tgt_sent));
        bitext.gold.push_back(std::move(gold));
    }
    return bitext;
}

inline double link_f1(const std::vector<std::vector<std::pair<int, int>>>& pred,
                      const std::vector<std::vector<std::pair<int, int>>>& gold) {
    size_t hit = 0, pred_n = 0, gold_n = 0;
    for (size_t s = 0; s < pred.size(); ++s) {
        pred_n += pred[s].size();
        gold_n += gold[s].size();
        for (const auto& link : pred[s])
            if (std::find(gold[s].begin(), gold[s].end(), link) != gold[s].end()) ++hit;
    }
    if (pred_n == 0 || gold_n == 0) return 0.0;
    double precision = static_cast<double>(hit) / static_cast<double>(pred_n);
    double recall = static_cast<double>(hit) / static_cast<double>(gold_n);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}
