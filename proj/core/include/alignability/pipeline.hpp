#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alignability/aligner.hpp"
#include "alignability/symmetrise.hpp"

namespace alignability {

struct PairSpec {
    std::string src;
    std::string tgt;
    std::string train_src;
    std::string train_tgt;
    std::string test_src;
    std::string test_tgt;
    std::string src_emb;  // optional
    std::string tgt_emb;  // optional
};

struct TokeniserSpec {
    enum class Type { none, bpe, unigram };
    Type type = Type::none;  // none = input is already tokenised (whitespace)
    std::string model_path;
};

struct PipelineConfig {
    std::vector<std::string> languages;  // optional sanity list
    std::vector<PairSpec> pairs;
    TokeniserSpec tokeniser;
    AlignerConfig aligner;
    SymHeuristic heuristic = SymHeuristic::gdfa;
    std::string metadata_path;
    std::string downstream_path;     // optional
    std::vector<std::string> tasks;  // optional; default = every task in the file
    std::string out_dir;
    uint64_t seed = 0;
    size_t max_train_pairs = 300000;
    std::optional<size_t> max_test_pairs;
    std::optional<size_t> max_sentence_tokens;  // training-side cap, default uncapped
    int threads = 1;
    bool include_family = true;
    bool exact_p = false;
};

// Reads the declarative JSON config. Relative paths are resolved against
// the config file's directory. Parse errors throw config.parse.
PipelineConfig load_pipeline_config(const std::string& path);

// Every problem, not just the first; empty means valid.
std::vector<std::string> validate_pipeline_config(const PipelineConfig& config);

// Runs the whole pipeline: per-pair tokenise / train / align / symmetrise /
// score (resumable via input-content hashes), then the report bundle under
// out_dir. Returns the number of pairs processed.
size_t run_pipeline(const PipelineConfig& config);

}  // namespace alignability
