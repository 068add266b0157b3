#include "alignability/aligner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <sstream>

#include "alignability/error.hpp"
#include "alignability/util.hpp"

namespace alignability {

namespace {

constexpr const char* kNullToken = "<NULL>";

inline uint64_t lex_key(int src_id, int tgt_id) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(src_id)) << 32) |
           static_cast<uint32_t>(tgt_id);
}

}  // namespace

void validate(const AlignerConfig& c) {
    if (!(c.lexical_concentration > 0))
        fail("config.invalid", "lexical_concentration must be positive");
    if (!(c.jump_concentration > 0)) fail("config.invalid", "jump_concentration must be positive");
    if (!(c.null_prior > 0 && c.null_prior < 1))
        fail("config.invalid", "null_prior must be in (0,1)");
    if (c.max_jump < 1) fail("config.invalid", "max_jump must be positive");
    if (c.train_iterations_lexical < 1)
        fail("config.invalid", "train_iterations_lexical must be positive");
    if (c.train_iterations_hmm < 0)
        fail("config.invalid", "train_iterations_hmm must be non-negative");
    if (c.test_iterations < 1) fail("config.invalid", "test_iterations must be positive");
}

void PriorSet::rebuild_vocab() {
    std::set<std::string> src_set;
    std::set<std::string> tgt_set;
    for (const auto& [pair, count] : lexical_counts) {
        (void)count;
        if (pair.first != kNullToken) src_set.insert(pair.first);
        tgt_set.insert(pair.second);
    }
    vocab_src.clear();
    vocab_src.push_back(kNullToken);
    vocab_src.insert(vocab_src.end(), src_set.begin(), src_set.end());
    vocab_tgt.assign(tgt_set.begin(), tgt_set.end());
}

GibbsAligner::GibbsAligner(const TokenisedCorpus& src, const TokenisedCorpus& tgt,
                           const AlignerConfig& config, const PriorSet* priors)
    : cfg_(config), rng_(config.seed) {
    validate(config);
    if (src.sentences.size() != tgt.sentences.size())
        fail("data.sentence-count-mismatch",
             "sentence-count mismatch " + std::to_string(src.sentences.size()) + " vs " +
                 std::to_string(tgt.sentences.size()));

    auto src_id = [&](const std::string& tok) {
        auto it = vsrc_index_.find(tok);
        if (it != vsrc_index_.end()) return it->second;
        int id = static_cast<int>(vsrc_tokens_.size());
        vsrc_tokens_.push_back(tok);
        vsrc_index_.emplace(tok, id);
        return id;
    };
    auto tgt_id = [&](const std::string& tok) {
        auto it = vtgt_index_.find(tok);
        if (it != vtgt_index_.end()) return it->second;
        int id = static_cast<int>(vtgt_tokens_.size());
        vtgt_tokens_.push_back(tok);
        vtgt_index_.emplace(tok, id);
        return id;
    };

    src_id(kNullToken);  // id 0
    if (priors) {
        for (const auto& t : priors->vocab_src) src_id(t);
        for (const auto& t : priors->vocab_tgt) tgt_id(t);
    }
    src_.reserve(src.sentences.size());
    tgt_.reserve(tgt.sentences.size());
    for (const auto& sent : src.sentences) {
        std::vector<int> ids;
        ids.reserve(sent.size());
        for (const auto& t : sent) ids.push_back(src_id(t));
        src_.push_back(std::move(ids));
    }
    for (const auto& sent : tgt.sentences) {
        std::vector<int> ids;
        ids.reserve(sent.size());
        for (const auto& t : sent) ids.push_back(tgt_id(t));
        tgt_.push_back(std::move(ids));
    }

    prior_row_.assign(vsrc_tokens_.size(), 0.0);
    live_row_.assign(vsrc_tokens_.size(), 0);
    jump_buckets_ = 2 * cfg_.max_jump + 2;  // offsets plus the initial bucket
    prior_jump_.assign(jump_buckets_, 0.0);
    live_jump_.assign(jump_buckets_, 0);

    if (priors) {
        for (const auto& [pair, count] : priors->lexical_counts) {
            int e = vsrc_index_.at(pair.first == kNullToken ? kNullToken : pair.first);
            int f = vtgt_index_.at(pair.second);
            prior_lex_[lex_key(e, f)] += count;
            prior_row_[e] += count;
        }
        for (const auto& [offset, count] : priors->jump_counts) {
            int clamped = std::clamp(offset, -cfg_.max_jump, cfg_.max_jump);
            prior_jump_[clamped + cfg_.max_jump] += count;
            prior_jump_total_ += count;
        }
        prior_jump_[jump_buckets_ - 1] += priors->initial_jump_count;
        prior_jump_total_ += priors->initial_jump_count;
    }

    align_.resize(src_.size());
    for (size_t s = 0; s < src_.size(); ++s) align_[s].assign(tgt_[s].size(), -1);
    tally_all();
}

double GibbsAligner::uniform01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void GibbsAligner::init_random() {
    for (size_t s = 0; s < src_.size(); ++s) {
        const size_t len = src_[s].size();
        for (size_t j = 0; j < align_[s].size(); ++j) {
            uint64_t pick = rng_() % (len + 1);
            align_[s][j] = pick == 0 ? -1 : static_cast<int>(pick - 1);
        }
    }
    tally_all();
}

void GibbsAligner::init_greedy_from_priors() {
    for (size_t s = 0; s < src_.size(); ++s) {
        const auto& S = src_[s];
        const auto& T = tgt_[s];
        for (size_t j = 0; j < T.size(); ++j) {
            // earliest source position wins ties; NULL only on a strict win
            int best = -1;
            if (!S.empty()) {
                best = 0;
                double best_term = trans_term_prior_only(S[0], T[j]);
                for (size_t i = 1; i < S.size(); ++i) {
                    double term = trans_term_prior_only(S[i], T[j]);
                    if (term > best_term) {
                        best = static_cast<int>(i);
                        best_term = term;
                    }
                }
                if (trans_term_prior_only(0, T[j]) > best_term) best = -1;
            }
            align_[s][j] = best;
        }
    }
    tally_all();
}

double GibbsAligner::trans_term(int src_id, int tgt_id) const {
    double num = cfg_.lexical_concentration;
    auto pit = prior_lex_.find(lex_key(src_id, tgt_id));
    if (pit != prior_lex_.end()) num += pit->second;
    auto lit = live_lex_.find(lex_key(src_id, tgt_id));
    if (lit != live_lex_.end()) num += static_cast<double>(lit->second);
    double den = prior_row_[src_id] + static_cast<double>(live_row_[src_id]) +
                 cfg_.lexical_concentration * static_cast<double>(vtgt_tokens_.size());
    return num / den;
}

double GibbsAligner::trans_term_prior_only(int src_id, int tgt_id) const {
    double num = cfg_.lexical_concentration;
    auto pit = prior_lex_.find(lex_key(src_id, tgt_id));
    if (pit != prior_lex_.end()) num += pit->second;
    double den = prior_row_[src_id] +
                 cfg_.lexical_concentration * static_cast<double>(vtgt_tokens_.size());
    return num / den;
}

double GibbsAligner::jump_ratio(int bucket) const {
    double num = prior_jump_[bucket] + static_cast<double>(live_jump_[bucket]) +
                 cfg_.jump_concentration;
    double den = prior_jump_total_ + static_cast<double>(live_jump_total_) +
                 cfg_.jump_concentration * static_cast<double>(jump_buckets_);
    return num / den;
}

int GibbsAligner::bucket_for(int prev_pos, int pos) const {
    if (prev_pos < 0) return jump_buckets_ - 1;
    int offset = std::clamp(pos - prev_pos, -cfg_.max_jump, cfg_.max_jump);
    return offset + cfg_.max_jump;
}

int GibbsAligner::prev_link(size_t s, size_t j) const {
    for (size_t k = j; k-- > 0;)
        if (align_[s][k] >= 0) return align_[s][k];
    return -1;
}

int GibbsAligner::next_link_src(size_t s, size_t j, size_t* pos_out) const {
    for (size_t k = j + 1; k < align_[s].size(); ++k) {
        if (align_[s][k] >= 0) {
            if (pos_out) *pos_out = k;
            return align_[s][k];
        }
    }
    return -1;
}

void GibbsAligner::add_link_counts(size_t s, size_t j, int value) {
    int e = align_[s][j] < 0 ? 0 : src_[s][align_[s][j]];
    int f = tgt_[s][j];
    live_lex_[lex_key(e, f)] += value;
    live_row_[e] += value;
}

// Updates the jump events whose identity depends on a[s][j]: the link's own
// incoming jump and the next non-NULL link's incoming jump.
void GibbsAligner::add_jump_events(size_t s, size_t j, int value) {
    int prev = prev_link(s, j);
    int next = next_link_src(s, j);
    int a = align_[s][j];
    if (a >= 0) {
        live_jump_[bucket_for(prev, a)] += value;
        live_jump_total_ += value;
        if (next >= 0) {
            live_jump_[bucket_for(a, next)] += value;
            live_jump_total_ += value;
        }
    } else if (next >= 0) {
        live_jump_[bucket_for(prev, next)] += value;
        live_jump_total_ += value;
    }
}

void GibbsAligner::tally_all() {
    live_lex_.clear();
    std::fill(live_row_.begin(), live_row_.end(), 0);
    std::fill(live_jump_.begin(), live_jump_.end(), 0);
    live_jump_total_ = 0;
    for (size_t s = 0; s < src_.size(); ++s) {
        int prev = -1;
        for (size_t j = 0; j < tgt_[s].size(); ++j) {
            int a = align_[s][j];
            int e = a < 0 ? 0 : src_[s][a];
            ++live_lex_[lex_key(e, tgt_[s][j])];
            ++live_row_[e];
            if (a >= 0) {
                ++live_jump_[bucket_for(prev, a)];
                ++live_jump_total_;
                prev = a;
            }
        }
    }
}

void GibbsAligner::resample_sentence(size_t s) {
    const auto& S = src_[s];
    const auto& T = tgt_[s];
    const size_t len = S.size();
    const double p0 = cfg_.null_prior;
    std::vector<double> weights(len);

    for (size_t j = 0; j < T.size(); ++j) {
        add_jump_events(s, j, -1);
        add_link_counts(s, j, -1);
        int prev = prev_link(s, j);

        double total = 0.0;
        for (size_t i = 0; i < len; ++i) {
            double w = trans_term(S[i], T[j]);
            if (hmm_phase_)
                w *= (1.0 - p0) * jump_ratio(bucket_for(prev, static_cast<int>(i)));
            else
                w *= (1.0 - p0) / static_cast<double>(len);
            weights[i] = w;
            total += w;
        }
        double w_null = p0 * trans_term(0, T[j]);
        total += w_null;

        double u = uniform01() * total;
        int picked = -1;
        double cum = 0.0;
        for (size_t i = 0; i < len; ++i) {
            cum += weights[i];
            if (u < cum) {
                picked = static_cast<int>(i);
                break;
            }
        }
        align_[s][j] = picked;
        add_link_counts(s, j, +1);
        add_jump_events(s, j, +1);
    }
}

void GibbsAligner::sweep() {
    for (size_t s = 0; s < src_.size(); ++s) resample_sentence(s);
}

double GibbsAligner::sentence_log_score(size_t s) const {
    const auto& S = src_[s];
    const auto& T = tgt_[s];
    const size_t len = S.size();
    const double p0 = cfg_.null_prior;
    double score = 0.0;
    int prev = -1;
    for (size_t j = 0; j < T.size(); ++j) {
        int a = align_[s][j];
        double w;
        if (a < 0) {
            w = p0 * trans_term(0, T[j]);
        } else {
            w = trans_term(S[a], T[j]);
            if (hmm_phase_)
                w *= (1.0 - p0) * jump_ratio(bucket_for(prev, a));
            else
                w *= (1.0 - p0) / static_cast<double>(len);
            prev = a;
        }
        score += std::log(w);
    }
    return score;
}

bool GibbsAligner::counts_consistent() const {
    std::unordered_map<uint64_t, int64_t> lex;
    std::vector<int64_t> row(vsrc_tokens_.size(), 0);
    std::vector<int64_t> jump(jump_buckets_, 0);
    int64_t jump_total = 0;
    for (size_t s = 0; s < src_.size(); ++s) {
        int prev = -1;
        for (size_t j = 0; j < tgt_[s].size(); ++j) {
            int a = align_[s][j];
            int e = a < 0 ? 0 : src_[s][a];
            ++lex[lex_key(e, tgt_[s][j])];
            ++row[e];
            if (a >= 0) {
                ++jump[bucket_for(prev, a)];
                ++jump_total;
                prev = a;
            }
        }
    }
    for (const auto& [key, count] : live_lex_) {
        auto it = lex.find(key);
        int64_t expected = it == lex.end() ? 0 : it->second;
        if (count != expected) return false;
        if (it != lex.end()) lex.erase(it);
    }
    for (const auto& [key, count] : lex) {
        (void)key;
        if (count != 0) return false;
    }
    if (row != live_row_) return false;
    if (jump != live_jump_) return false;
    if (jump_total != live_jump_total_) return false;
    return true;
}

PriorSet GibbsAligner::extract_priors() const {
    PriorSet out;
    std::map<std::pair<int, int>, double> combined;
    for (const auto& [key, count] : prior_lex_)
        combined[{static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu)}] += count;
    for (const auto& [key, count] : live_lex_)
        combined[{static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu)}] +=
            static_cast<double>(count);
    for (const auto& [ids, count] : combined) {
        if (count <= 0) continue;
        out.lexical_counts[{vsrc_tokens_[ids.first], vtgt_tokens_[ids.second]}] = count;
    }
    for (int b = 0; b < jump_buckets_ - 1; ++b) {
        double count = prior_jump_[b] + static_cast<double>(live_jump_[b]);
        if (count > 0) out.jump_counts[b - cfg_.max_jump] = count;
    }
    out.initial_jump_count =
        prior_jump_[jump_buckets_ - 1] + static_cast<double>(live_jump_[jump_buckets_ - 1]);
    out.rebuild_vocab();
    return out;
}

DirectionalAlignment GibbsAligner::extract_alignment() const {
    DirectionalAlignment out;
    out.sentences.resize(src_.size());
    for (size_t s = 0; s < src_.size(); ++s) {
        AlignedSentence& sent = out.sentences[s];
        for (size_t j = 0; j < align_[s].size(); ++j) {
            if (align_[s][j] < 0)
                sent.null_aligned.push_back(static_cast<int>(j));
            else
                sent.links.emplace_back(align_[s][j], static_cast<int>(j));
        }
        std::sort(sent.links.begin(), sent.links.end());
        sent.score = sentence_log_score(s);
    }
    return out;
}

PriorSet train_priors(const TokenisedCorpus& src, const TokenisedCorpus& tgt,
                      const AlignerConfig& config) {
    size_t usable = 0;
    for (const auto& sent : tgt.sentences) usable += sent.size();
    if (tgt.sentences.empty() || usable == 0)
        fail("data.empty-corpus", "training corpus has no usable sentence pairs");

    GibbsAligner aligner(src, tgt, config);
    aligner.init_random();
    aligner.set_hmm_phase(false);
    for (int it = 0; it < config.train_iterations_lexical; ++it) {
        aligner.sweep();
        assert(aligner.counts_consistent());
    }
    if (config.use_hmm) {
        aligner.set_hmm_phase(true);
        for (int it = 0; it < config.train_iterations_hmm; ++it) {
            aligner.sweep();
            assert(aligner.counts_consistent());
        }
    }
    return aligner.extract_priors();
}

DirectionalAlignment align_with_priors(const TokenisedCorpus& src, const TokenisedCorpus& tgt,
                                       const PriorSet& priors, const AlignerConfig& config) {
    if (tgt.sentences.empty()) fail("data.empty-corpus", "test corpus is empty");
    GibbsAligner aligner(src, tgt, config, &priors);
    aligner.init_greedy_from_priors();
    aligner.set_hmm_phase(config.use_hmm);
    for (int it = 0; it < config.test_iterations; ++it) {
        aligner.sweep();
        assert(aligner.counts_consistent());
    }
    DirectionalAlignment out = aligner.extract_alignment();
    out.src_lang = src.lang;
    out.tgt_lang = tgt.lang;
    return out;
}

void save_priors(const PriorSet& priors, const std::string& path) {
    std::ostringstream out;
    out << "#priors v1\n[lex]\n";
    for (const auto& [pair, count] : priors.lexical_counts)
        out << escape_token(pair.first) << '\t' << escape_token(pair.second) << '\t'
            << format_double_exact(count) << '\n';
    out << "[jump]\n";
    for (const auto& [offset, count] : priors.jump_counts)
        out << offset << '\t' << format_double_exact(count) << '\n';
    if (priors.initial_jump_count > 0)
        out << "<INIT>\t" << format_double_exact(priors.initial_jump_count) << '\n';
    write_file_atomic(path, out.str());
}

PriorSet load_priors(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0] != "#priors v1")
        fail("data.priors", path + ": expected \"#priors v1\" header");
    PriorSet priors;
    enum { none, lex, jump } section = none;
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        if (line == "[lex]") {
            section = lex;
            continue;
        }
        if (line == "[jump]") {
            section = jump;
            continue;
        }
        std::string where = path + " line " + std::to_string(i + 1);
        std::vector<std::string> cols = split(line, '\t');
        if (section == lex) {
            if (cols.size() != 3) fail("data.priors", where + ": expected src<TAB>tgt<TAB>count");
            bool ok = false;
            double count = parse_double(cols[2], ok);
            if (!ok || !std::isfinite(count))
                fail("data.priors", where + ": bad count \"" + cols[2] + "\"");
            if (count <= 0) fail("data.priors", where + ": counts must be strictly positive");
            auto key = std::make_pair(unescape_token(cols[0]), unescape_token(cols[1]));
            if (priors.lexical_counts.count(key))
                fail("data.priors", where + ": duplicate lexical entry");
            priors.lexical_counts[key] = count;
        } else if (section == jump) {
            if (cols.size() != 2) fail("data.priors", where + ": expected offset<TAB>count");
            bool ok = false;
            double count = parse_double(cols[1], ok);
            if (!ok || !std::isfinite(count))
                fail("data.priors", where + ": bad count \"" + cols[1] + "\"");
            if (count <= 0) fail("data.priors", where + ": counts must be strictly positive");
            if (cols[0] == "<INIT>") {
                priors.initial_jump_count = count;
            } else {
                std::optional<long long> offset = parse_int(cols[0]);
                if (!offset) fail("data.priors", where + ": bad offset \"" + cols[0] + "\"");
                if (priors.jump_counts.count(static_cast<int>(*offset)))
                    fail("data.priors", where + ": duplicate jump offset");
                priors.jump_counts[static_cast<int>(*offset)] = count;
            }
        } else {
            fail("data.priors", where + ": content before any section header");
        }
    }
    priors.rebuild_vocab();
    return priors;
}

void write_pharaoh(const DirectionalAlignment& alignment, const std::string& path) {
    std::ostringstream out;
    for (const auto& sent : alignment.sentences) {
        for (size_t k = 0; k < sent.links.size(); ++k) {
            if (k) out << ' ';
            out << sent.links[k].first << '-' << sent.links[k].second;
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

std::vector<std::vector<std::pair<int, int>>> read_pharaoh(const std::string& path) {
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::string> lines = read_lines(path);
    out.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        std::vector<std::pair<int, int>> links;
        for (const auto& item : split_whitespace(lines[i])) {
            size_t dash = item.find('-');
            std::optional<long long> a, b;
            if (dash != std::string::npos) {
                a = parse_int(item.substr(0, dash));
                b = parse_int(item.substr(dash + 1));
            }
            if (!a || !b || *a < 0 || *b < 0)
                fail("data.pharaoh", path + " line " + std::to_string(i + 1) +
                                         ": bad link \"" + item + "\"");
            links.emplace_back(static_cast<int>(*a), static_cast<int>(*b));
        }
        std::sort(links.begin(), links.end());
        out.push_back(std::move(links));
    }
    return out;
}

void write_scores(const DirectionalAlignment& alignment, const std::string& path) {
    std::ostringstream out;
    for (const auto& sent : alignment.sentences) out << format_fixed(sent.score, 6) << '\n';
    write_file_atomic(path, out.str());
}

}  // namespace alignability
