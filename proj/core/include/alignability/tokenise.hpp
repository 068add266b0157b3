#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace alignability {

// Word-boundary conventions:
//  - BPE appends end_of_word_marker to the final symbol of each
//    whitespace-separated word ("</w>" for trained models).
//  - Unigram prepends a literal space to every word except the first, so
//    plain concatenation of a sentence's tokens restores the sentence.
//    The space is serialised as U+2581 in token files.

struct BpeModel {
    std::vector<std::pair<std::string, std::string>> merges;  // earlier = higher priority
    std::unordered_set<std::string> vocab;
    std::string end_of_word_marker = "</w>";
};

struct UnigramModel {
    std::unordered_map<std::string, double> entries;  // token -> natural-log prob
    std::string unk_token = "<unk>";
    double unk_logprob = -20.0;
};

using Tokeniser = std::variant<BpeModel, UnigramModel>;

struct TokenisedCorpus {
    std::string lang;
    std::vector<std::vector<std::string>> sentences;

    size_t token_count() const;
};

// Greedy most-frequent-pair merging until vocab_size symbols exist or no
// pair occurs at least twice. Ties broken lexicographically on the pair.
BpeModel train_bpe(const std::vector<std::string>& texts, size_t vocab_size);

std::vector<std::string> bpe_encode(const BpeModel& model, const std::string& sentence);

// Viterbi segmentation maximising summed log-probabilities. Ties broken
// toward fewer tokens, then lexicographically on the token sequence.
// Unknown characters emit unk_token at unk_logprob.
std::vector<std::string> unigram_encode(const UnigramModel& model, const std::string& sentence);

// Averages token probabilities across models (absent = 0), keeps the
// target_size most probable tokens plus all single-character tokens,
// then renormalises.
UnigramModel tokmix_merge(const std::vector<UnigramModel>& models, size_t target_size);

TokenisedCorpus tokenise_corpus(const std::vector<std::string>& corpus_side,
                                const Tokeniser& tokeniser, const std::string& lang = "");

// Passthrough for already-tokenised text: whitespace splitting only.
TokenisedCorpus whitespace_tokenise(const std::vector<std::string>& corpus_side,
                                    const std::string& lang = "");

// Inverse of the encoders' marker conventions, used by round-trip checks.
std::string detokenise_bpe(const std::vector<std::string>& tokens, const std::string& marker);
std::string detokenise_unigram(const std::vector<std::string>& tokens);

void save_bpe(const BpeModel& model, const std::string& path);
BpeModel load_bpe(const std::string& path);

void save_unigram(const UnigramModel& model, const std::string& path);
UnigramModel load_unigram(const std::string& path);

void save_tokenised_corpus(const TokenisedCorpus& corpus, const std::string& path);
TokenisedCorpus load_tokenised_corpus(const std::string& path, const std::string& lang = "");

}  // namespace alignability
