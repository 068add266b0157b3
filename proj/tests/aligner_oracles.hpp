#pragma once

// Independent oracles for the aligner tests: classic IBM Model 1 EM, and
// exhaustive enumeration of the collapsed lexical posterior.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "alignability/aligner.hpp"
#include "alignability/tokenise.hpp"

// ---------------------------------------------------------------------------
// IBM Model 1 with a NULL word, trained by EM. Returns p(f|e) tables.
// ---------------------------------------------------------------------------
class Ibm1Oracle {
public:
    Ibm1Oracle(const alignability::TokenisedCorpus& src, const alignability::TokenisedCorpus& tgt,
               int iterations) {
        std::map<std::string, bool> tgt_vocab;
        for (const auto& sent : tgt.sentences)
            for (const auto& f : sent) tgt_vocab[f] = true;
        double uniform = 1.0 / static_cast<double>(tgt_vocab.size());

        for (int it = 0; it < iterations; ++it) {
            std::map<std::pair<std::string, std::string>, double> count;
            std::map<std::string, double> total;
            for (size_t s = 0; s < src.sentences.size(); ++s) {
                std::vector<std::string> es = src.sentences[s];
                es.insert(es.begin(), "<NULL>");
                for (const auto& f : tgt.sentences[s]) {
                    double denom = 0.0;
                    for (const auto& e : es) denom += prob(e, f, uniform);
                    for (const auto& e : es) {
                        double w = prob(e, f, uniform) / denom;
                        count[{e, f}] += w;
                        total[e] += w;
                    }
                }
            }
            table_.clear();
            for (const auto& [key, c] : count) table_[key] = c / total[key.first];
        }
    }

    double prob(const std::string& e, const std::string& f, double fallback = 0.0) const {
        auto it = table_.find({e, f});
        return it == table_.end() ? fallback : it->second;
    }

private:
    std::map<std::pair<std::string, std::string>, double> table_;
};

// ---------------------------------------------------------------------------
// Exhaustive enumeration of the collapsed lexical model's posterior:
//   P(A,F) = prod_j prior(a_j) * prod_e DirichletMultinomial(assignments to e)
// with prior(NULL) = p0 and prior(i) = (1-p0)/src_len. Returns the exact
// per-position link marginals P(a_sj = candidate).
// ---------------------------------------------------------------------------
struct PosteriorMarginals {
    // [sentence][tgt position][candidate] with candidate 0 = NULL,
    // candidate k+1 = source position k
    std::vector<std::vector<std::vector<double>>> p;
};

inline PosteriorMarginals enumerate_lexical_posterior(const alignability::TokenisedCorpus& src,
                                                      const alignability::TokenisedCorpus& tgt,
                                                      const alignability::AlignerConfig& cfg) {
    const double p0 = cfg.null_prior;
    const double lambda = cfg.lexical_concentration;

    std::map<std::string, int> tgt_ids;
    for (const auto& sent : tgt.sentences)
        for (const auto& f : sent)
            if (!tgt_ids.count(f)) {
                int id = static_cast<int>(tgt_ids.size());
                tgt_ids[f] = id;
            }
    const double V = static_cast<double>(tgt_ids.size());

    struct Position {
        size_t s;
        size_t j;
        size_t candidates;  // src_len + 1
    };
    std::vector<Position> positions;
    for (size_t s = 0; s < tgt.sentences.size(); ++s)
        for (size_t j = 0; j < tgt.sentences[s].size(); ++j)
            positions.push_back({s, j, src.sentences[s].size() + 1});

    PosteriorMarginals out;
    out.p.resize(tgt.sentences.size());
    for (size_t s = 0; s < tgt.sentences.size(); ++s)
        out.p[s].assign(tgt.sentences[s].size(),
                        std::vector<double>(src.sentences[s].size() + 1, 0.0));

    std::vector<size_t> choice(positions.size(), 0);
    std::vector<double> weights;
    std::vector<std::vector<size_t>> choices;

    for (;;) {
        // joint weight of this configuration
        std::map<std::pair<std::string, std::string>, int> n_ef;
        std::map<std::string, int> n_e;
        double log_prior = 0.0;
        for (size_t k = 0; k < positions.size(); ++k) {
            const Position& pos = positions[k];
            const std::string& f = tgt.sentences[pos.s][pos.j];
            if (choice[k] == 0) {
                log_prior += std::log(p0);
                ++n_ef[{"<NULL>", f}];
                ++n_e["<NULL>"];
            } else {
                log_prior += std::log((1.0 - p0) /
                                      static_cast<double>(src.sentences[pos.s].size()));
                const std::string& e = src.sentences[pos.s][choice[k] - 1];
                ++n_ef[{e, f}];
                ++n_e[e];
            }
        }
        double log_dm = 0.0;
        for (const auto& [e, n] : n_e)
            log_dm += std::lgamma(lambda * V) - std::lgamma(lambda * V + n);
        for (const auto& [key, n] : n_ef)
            log_dm += std::lgamma(lambda + n) - std::lgamma(lambda);

        weights.push_back(log_prior + log_dm);
        choices.push_back(choice);

        // next configuration
        size_t k = 0;
        while (k < positions.size()) {
            if (++choice[k] < positions[k].candidates) break;
            choice[k] = 0;
            ++k;
        }
        if (k == positions.size()) break;
    }

    double max_w = weights[0];
    for (double w : weights) max_w = std::max(max_w, w);
    double total = 0.0;
    for (double& w : weights) {
        w = std::exp(w - max_w);
        total += w;
    }
    for (size_t c = 0; c < choices.size(); ++c) {
        double p = weights[c] / total;
        for (size_t k = 0; k < positions.size(); ++k)
            out.p[positions[k].s][positions[k].j][choices[c][k]] += p;
    }
    return out;
}
