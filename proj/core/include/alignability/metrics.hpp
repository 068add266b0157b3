#pragma once

#include <map>
#include <string>
#include <vector>

#include "alignability/aligner.hpp"
#include "alignability/symmetrise.hpp"
#include "alignability/tokenise.hpp"

namespace alignability {

struct TokenDistribution {
    std::string lang;
    std::map<std::string, double> probs;  // only tokens with nonzero count
};

struct PairMetrics {
    std::string src;
    std::string tgt;
    double jsd = 0.0;
    double one_to_one_fwd = 0.0;
    double one_to_one_rev = 0.0;
    double alignability = 0.0;  // per-decision cost in nats, lower is better
};

// Relative token frequencies over the whole corpus side.
TokenDistribution token_distribution(const TokenisedCorpus& corpus);

// Jensen-Shannon divergence with base-2 logarithms over the union support,
// so the result is in [0,1]. Symmetric by evaluation order.
double jsd(const TokenDistribution& p, const TokenDistribution& q);

// Fraction of source-side tokens in a 1-1 correspondence: link degree
// exactly 1 and the unique partner's degree exactly 1, over all source
// tokens. rev swaps the roles on the same symmetrised link set.
std::pair<double, double> one_to_one_proportion(const SymmetrisedAlignment& sym,
                                                const TokenisedCorpus& src_side,
                                                const TokenisedCorpus& tgt_side);

// Mean over both directions of -(sum of sentence scores) / (number of
// alignment decisions in that direction). Lower is better.
double alignability_score(const DirectionalAlignment& fwd, const DirectionalAlignment& rev,
                          size_t fwd_decisions, size_t rev_decisions);
double alignability_score(const DirectionalAlignment& fwd, const DirectionalAlignment& rev);

// CSV with header src,tgt,jsd,one_to_one_fwd,one_to_one_rev,alignability
// and #seed / #normalisation metadata comment lines.
std::string render_metrics_csv(const std::vector<PairMetrics>& rows, uint64_t seed);
std::vector<PairMetrics> parse_metrics_csv(const std::string& text);

}  // namespace alignability
