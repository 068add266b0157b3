#include "alignability/tokenise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "alignability/error.hpp"
#include "alignability/util.hpp"

namespace alignability {

size_t TokenisedCorpus::token_count() const {
    size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

namespace {

std::vector<std::string> word_symbols(const std::string& word, const std::string& marker) {
    std::vector<std::string> syms = split_codepoints(word);
    if (!syms.empty() && !marker.empty()) syms.back() += marker;
    return syms;
}

// One left-to-right pass is exhaustive for a single merge: the merged
// symbol can never re-form the same pair with a neighbour.
void apply_merge(std::vector<std::string>& syms, const std::string& left,
                 const std::string& right) {
    size_t w = 0;
    size_t i = 0;
    while (i < syms.size()) {
        if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
            syms[w++] = left + right;
            i += 2;
        } else {
            if (w != i) syms[w] = std::move(syms[i]);
            ++w;
            ++i;
        }
    }
    syms.resize(w);
}

}  // namespace

BpeModel train_bpe(const std::vector<std::string>& texts, size_t vocab_size) {
    // word frequency table over all texts
    std::map<std::string, long long> word_freq;
    for (const auto& text : texts)
        for (auto& w : split_whitespace(text)) ++word_freq[w];

    BpeModel model;
    std::vector<std::vector<std::string>> words;
    std::vector<long long> freqs;
    words.reserve(word_freq.size());
    for (const auto& [w, f] : word_freq) {
        words.push_back(word_symbols(w, model.end_of_word_marker));
        freqs.push_back(f);
    }

    for (const auto& syms : words)
        for (const auto& s : syms) model.vocab.insert(s);
    const size_t alphabet_size = model.vocab.size();
    if (vocab_size < alphabet_size || vocab_size == 0)
        fail("data.vocab-size", "vocab_size " + std::to_string(vocab_size) +
                                    " is below the alphabet size " +
                                    std::to_string(alphabet_size));

    while (model.vocab.size() < vocab_size) {
        std::map<std::pair<std::string, std::string>, long long> pair_counts;
        for (size_t k = 0; k < words.size(); ++k) {
            const auto& syms = words[k];
            for (size_t i = 0; i + 1 < syms.size(); ++i)
                pair_counts[{syms[i], syms[i + 1]}] += freqs[k];
        }
        // most frequent pair; std::map iteration gives the lexicographic
        // tie-break for free
        const std::pair<std::string, std::string>* best = nullptr;
        long long best_count = 1;
        for (const auto& [pair, count] : pair_counts) {
            if (count > best_count) {
                best = &pair;
                best_count = count;
            }
        }
        if (!best) break;  // no pair occurs at least twice

        model.merges.push_back(*best);
        model.vocab.insert(best->first + best->second);
        for (auto& syms : words) apply_merge(syms, best->first, best->second);
    }
    return model;
}

std::vector<std::string> bpe_encode(const BpeModel& model, const std::string& sentence) {
    std::vector<std::string> out;
    for (const auto& word : split_whitespace(sentence)) {
        std::vector<std::string> syms = word_symbols(word, model.end_of_word_marker);
        for (const auto& [l, r] : model.merges) {
            if (syms.size() < 2) break;
            apply_merge(syms, l, r);
        }
        out.insert(out.end(), syms.begin(), syms.end());
    }
    return out;
}

namespace {

struct LatticeState {
    double score = -std::numeric_limits<double>::infinity();
    std::vector<std::string> tokens;
    bool reached = false;
};

// candidate beats incumbent on (score desc, token count asc, lexicographic)
bool better(double score, const std::vector<std::string>& tokens, const LatticeState& inc) {
    if (!inc.reached) return true;
    if (score != inc.score) return score > inc.score;
    if (tokens.size() != inc.tokens.size()) return tokens.size() < inc.tokens.size();
    return tokens < inc.tokens;
}

std::vector<std::string> viterbi_segment(const UnigramModel& model, const std::string& piece,
                                         size_t max_token_cps) {
    std::vector<std::string> cps = split_codepoints(piece);
    const size_t n = cps.size();
    std::vector<LatticeState> dp(n + 1);
    dp[0].score = 0.0;
    dp[0].reached = true;

    for (size_t i = 1; i <= n; ++i) {
        size_t lo = max_token_cps >= i ? 0 : i - max_token_cps;
        for (size_t j = lo; j < i; ++j) {
            if (!dp[j].reached) continue;
            std::string sub;
            for (size_t k = j; k < i; ++k) sub += cps[k];
            auto it = model.entries.find(sub);
            double edge;
            std::string token;
            if (it != model.entries.end()) {
                edge = it->second;
                token = sub;
            } else if (i - j == 1) {
                edge = model.unk_logprob;  // unknown character fallback
                token = model.unk_token;
            } else {
                continue;
            }
            double score = dp[j].score + edge;
            std::vector<std::string> tokens = dp[j].tokens;
            tokens.push_back(token);
            if (better(score, tokens, dp[i])) {
                dp[i].score = score;
                dp[i].tokens = std::move(tokens);
                dp[i].reached = true;
            }
        }
    }
    return dp[n].tokens;
}

}  // namespace

std::vector<std::string> unigram_encode(const UnigramModel& model, const std::string& sentence) {
    size_t max_cps = 1;
    for (const auto& [tok, lp] : model.entries) {
        (void)lp;
        max_cps = std::max(max_cps, split_codepoints(tok).size());
    }

    std::vector<std::string> out;
    std::vector<std::string> words = split_whitespace(sentence);
    for (size_t k = 0; k < words.size(); ++k) {
        std::string piece = k == 0 ? words[k] : " " + words[k];
        std::vector<std::string> tokens = viterbi_segment(model, piece, max_cps);
        out.insert(out.end(), tokens.begin(), tokens.end());
    }
    return out;
}

UnigramModel tokmix_merge(const std::vector<UnigramModel>& models, size_t target_size) {
    if (models.size() < 2) fail("data.tokmix", "tokmix_merge needs at least 2 models");

    std::map<std::string, double> avg_prob;
    for (const auto& m : models)
        for (const auto& [tok, lp] : m.entries) avg_prob[tok] += std::exp(lp);
    for (auto& [tok, p] : avg_prob) p /= static_cast<double>(models.size());

    size_t alphabet = 0;
    for (const auto& [tok, p] : avg_prob)
        if (split_codepoints(tok).size() == 1) ++alphabet;
    if (target_size < alphabet)
        fail("data.tokmix", "target_size " + std::to_string(target_size) +
                                " is below the union alphabet size " + std::to_string(alphabet));

    std::vector<std::pair<std::string, double>> ranked(avg_prob.begin(), avg_prob.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    UnigramModel merged;
    double total = 0.0;
    std::map<std::string, double> kept;
    for (size_t i = 0; i < ranked.size(); ++i) {
        bool single_char = split_codepoints(ranked[i].first).size() == 1;
        if (i < target_size || single_char) {
            kept[ranked[i].first] = ranked[i].second;
            total += ranked[i].second;
        }
    }
    for (const auto& [tok, p] : kept) merged.entries[tok] = std::log(p / total);
    return merged;
}

TokenisedCorpus tokenise_corpus(const std::vector<std::string>& corpus_side,
                                const Tokeniser& tokeniser, const std::string& lang) {
    TokenisedCorpus out;
    out.lang = lang;
    out.sentences.reserve(corpus_side.size());
    for (size_t i = 0; i < corpus_side.size(); ++i) {
        const std::string& sentence = corpus_side[i];
        if (contains_space_escape(sentence))
            fail("data.forbidden-escape",
                 "literal U+2581 in input sentence " + std::to_string(i + 1));
        if (std::holds_alternative<BpeModel>(tokeniser))
            out.sentences.push_back(bpe_encode(std::get<BpeModel>(tokeniser), sentence));
        else
            out.sentences.push_back(unigram_encode(std::get<UnigramModel>(tokeniser), sentence));
    }
    return out;
}

TokenisedCorpus whitespace_tokenise(const std::vector<std::string>& corpus_side,
                                    const std::string& lang) {
    TokenisedCorpus out;
    out.lang = lang;
    out.sentences.reserve(corpus_side.size());
    for (size_t i = 0; i < corpus_side.size(); ++i) {
        if (contains_space_escape(corpus_side[i]))
            fail("data.forbidden-escape",
                 "literal U+2581 in input sentence " + std::to_string(i + 1));
        out.sentences.push_back(split_whitespace(corpus_side[i]));
    }
    return out;
}

std::string detokenise_bpe(const std::vector<std::string>& tokens, const std::string& marker) {
    std::string text;
    for (const auto& tok : tokens) {
        if (!marker.empty() && tok.size() >= marker.size() &&
            tok.compare(tok.size() - marker.size(), marker.size(), marker) == 0) {
            text += tok.substr(0, tok.size() - marker.size());
            text += ' ';
        } else {
            text += tok;
        }
    }
    if (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

std::string detokenise_unigram(const std::vector<std::string>& tokens) {
    std::string text;
    for (const auto& tok : tokens) text += tok;
    return text;
}

void save_bpe(const BpeModel& model, const std::string& path) {
    if (model.end_of_word_marker != "</w>")
        fail("data.bpe-model", "only the \"</w>\" marker convention is serialisable");
    std::ostringstream out;
    out << "#bpe v1\n";
    for (const auto& [l, r] : model.merges) out << l << '\t' << r << '\n';
    write_file_atomic(path, out.str());
}

BpeModel load_bpe(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0] != "#bpe v1")
        fail("data.bpe-model", path + ": expected \"#bpe v1\" header");
    BpeModel model;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> cols = split(lines[i], '\t');
        if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
            fail("data.bpe-model",
                 path + " line " + std::to_string(i + 1) + ": expected \"left<TAB>right\"");
        model.merges.emplace_back(cols[0], cols[1]);
        model.vocab.insert(cols[0]);
        model.vocab.insert(cols[1]);
        model.vocab.insert(cols[0] + cols[1]);
    }
    return model;
}

void save_unigram(const UnigramModel& model, const std::string& path) {
    std::vector<std::pair<std::string, double>> entries;
    entries.reserve(model.entries.size());
    for (const auto& [tok, lp] : model.entries) entries.emplace_back(escape_token(tok), lp);
    std::sort(entries.begin(), entries.end());
    std::ostringstream out;
    out << "#unigram v1\n";
    for (const auto& [tok, lp] : entries) out << tok << '\t' << format_double_exact(lp) << '\n';
    write_file_atomic(path, out.str());
}

UnigramModel load_unigram(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0] != "#unigram v1")
        fail("data.unigram-model", path + ": expected \"#unigram v1\" header");
    UnigramModel model;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> cols = split(lines[i], '\t');
        if (cols.size() != 2 || cols[0].empty())
            fail("data.unigram-model",
                 path + " line " + std::to_string(i + 1) + ": expected \"token<TAB>logprob\"");
        bool ok = false;
        double lp = parse_double(cols[1], ok);
        if (!ok || !std::isfinite(lp))
            fail("data.unigram-model",
                 path + " line " + std::to_string(i + 1) + ": bad log-probability \"" + cols[1] + "\"");
        std::string tok = unescape_token(cols[0]);
        if (model.entries.count(tok))
            fail("data.unigram-model",
                 path + " line " + std::to_string(i + 1) + ": duplicate token \"" + cols[0] + "\"");
        model.entries[tok] = lp;
    }
    return model;
}

void save_tokenised_corpus(const TokenisedCorpus& corpus, const std::string& path) {
    std::ostringstream out;
    for (const auto& sentence : corpus.sentences) {
        for (size_t i = 0; i < sentence.size(); ++i) {
            if (i) out << ' ';
            out << escape_token(sentence[i]);
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

TokenisedCorpus load_tokenised_corpus(const std::string& path, const std::string& lang) {
    TokenisedCorpus corpus;
    corpus.lang = lang;
    std::vector<std::string> lines = read_lines(path);
    corpus.sentences.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        std::vector<std::string> sentence;
        if (!lines[i].empty()) {
            for (const auto& tok : split(lines[i], ' ')) {
                if (tok.empty())
                    fail("data.tokenised-corpus",
                         path + " line " + std::to_string(i + 1) + ": empty token");
                sentence.push_back(unescape_token(tok));
            }
        }
        corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

}  // namespace alignability
