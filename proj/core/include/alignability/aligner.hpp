#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "alignability/tokenise.hpp"

namespace alignability {

struct AlignerConfig {
    bool use_hmm = true;
    double lexical_concentration = 0.001;  // Dirichlet prior on translation distributions
    double jump_concentration = 0.5;
    double null_prior = 0.2;
    int max_jump = 10;  // jump offsets clamped to +-max_jump
    int train_iterations_lexical = 50;
    int train_iterations_hmm = 50;
    int test_iterations = 1;
    uint64_t seed = 0;
};

void validate(const AlignerConfig& config);

// Lexical-translation and jump counts learned on a training bitext,
// injected as pseudo-counts when aligning a test bitext. Vocab tables are
// derived from the count keys; NULL is spelled "<NULL>".
struct PriorSet {
    std::map<std::pair<std::string, std::string>, double> lexical_counts;
    std::map<int, double> jump_counts;  // clamped offset -> count
    double initial_jump_count = 0.0;    // dedicated sentence-initial bucket
    std::vector<std::string> vocab_src;  // includes "<NULL>"
    std::vector<std::string> vocab_tgt;

    void rebuild_vocab();
    bool empty() const { return lexical_counts.empty(); }
    bool operator==(const PriorSet&) const = default;
};

struct AlignedSentence {
    std::vector<std::pair<int, int>> links;  // (src index, tgt index), sorted
    std::vector<int> null_aligned;           // tgt positions aligned to NULL, sorted
    double score = 0.0;                      // sum of link log-probabilities, <= 0
};

struct DirectionalAlignment {
    std::string src_lang;
    std::string tgt_lang;
    std::vector<AlignedSentence> sentences;
};

// Collapsed-Gibbs sampler state over one direction of a bitext. Counts are
// kept as loaded prior mass plus an integer live tally so that
// increment/decrement is exact.
class GibbsAligner {
public:
    GibbsAligner(const TokenisedCorpus& src, const TokenisedCorpus& tgt,
                 const AlignerConfig& config, const PriorSet* priors = nullptr);

    void init_random();
    void init_greedy_from_priors();
    void set_hmm_phase(bool on) { hmm_phase_ = on; }

    // One collapsed-Gibbs pass over the sentence: per target position,
    // decrement counts, sample a new link, increment counts.
    void resample_sentence(size_t sentence_index);
    void sweep();

    size_t sentence_count() const { return src_.size(); }
    const std::vector<int>& alignment(size_t sentence_index) const {
        return align_[sentence_index];
    }
    double sentence_log_score(size_t sentence_index) const;

    // true iff the live count tables equal the tally implied by the
    // current alignment vectors
    bool counts_consistent() const;

    PriorSet extract_priors() const;
    DirectionalAlignment extract_alignment() const;

private:
    friend struct GibbsAlignerProbe;

    double trans_term(int src_id, int tgt_id) const;
    double trans_term_prior_only(int src_id, int tgt_id) const;
    double jump_ratio(int bucket) const;
    int bucket_for(int prev_pos, int pos) const;
    int prev_link(size_t s, size_t j) const;
    int next_link_src(size_t s, size_t j, size_t* pos_out = nullptr) const;
    void add_link_counts(size_t s, size_t j, int value);
    void add_jump_events(size_t s, size_t j, int value);
    void tally_all();
    double uniform01();

    AlignerConfig cfg_;
    bool hmm_phase_ = false;
    std::vector<std::string> vsrc_tokens_;  // id 0 = <NULL>
    std::vector<std::string> vtgt_tokens_;
    std::unordered_map<std::string, int> vsrc_index_;
    std::unordered_map<std::string, int> vtgt_index_;
    std::vector<std::vector<int>> src_;
    std::vector<std::vector<int>> tgt_;
    std::vector<std::vector<int>> align_;  // a[s][j] = src position or -1 for NULL

    std::unordered_map<uint64_t, double> prior_lex_;
    std::vector<double> prior_row_;
    std::unordered_map<uint64_t, int64_t> live_lex_;
    std::vector<int64_t> live_row_;

    int jump_buckets_ = 0;  // 2*max_jump+1 offsets plus the initial bucket
    std::vector<double> prior_jump_;
    std::vector<int64_t> live_jump_;
    double prior_jump_total_ = 0.0;
    int64_t live_jump_total_ = 0;

    std::mt19937_64 rng_;
};

// Trains lexical (and, if configured, jump) counts by collapsed Gibbs
// sampling from a random start. Deterministic given (corpus, config).
PriorSet train_priors(const TokenisedCorpus& src, const TokenisedCorpus& tgt,
                      const AlignerConfig& config);

// Greedy-from-priors initialisation followed by test_iterations sweeps with
// counts = priors + live test counts. Sentence scores are evaluated under
// the final count state.
DirectionalAlignment align_with_priors(const TokenisedCorpus& src, const TokenisedCorpus& tgt,
                                       const PriorSet& priors, const AlignerConfig& config);

void save_priors(const PriorSet& priors, const std::string& path);
PriorSet load_priors(const std::string& path);

// Pharaoh format: one sentence per line of zero-indexed "i-j" pairs.
void write_pharaoh(const DirectionalAlignment& alignment, const std::string& path);
std::vector<std::vector<std::pair<int, int>>> read_pharaoh(const std::string& path);
void write_scores(const DirectionalAlignment& alignment, const std::string& path);

}  // namespace alignability
