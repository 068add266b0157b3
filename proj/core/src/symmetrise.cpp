#include "alignability/symmetrise.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "alignability/error.hpp"
#include "alignability/util.hpp"

namespace alignability {

namespace {

using LinkSet = std::set<std::pair<int, int>>;

void check_sentence_counts(const DirectionalAlignment& fwd, const DirectionalAlignment& rev) {
    if (fwd.sentences.size() != rev.sentences.size())
        fail("data.sentence-count-mismatch",
             "sentence-count mismatch " + std::to_string(fwd.sentences.size()) + " vs " +
                 std::to_string(rev.sentences.size()));
}

LinkSet fwd_links(const AlignedSentence& sent) {
    return LinkSet(sent.links.begin(), sent.links.end());
}

LinkSet rev_links(const AlignedSentence& sent) {
    LinkSet out;
    for (const auto& [a, b] : sent.links) out.emplace(b, a);
    return out;
}

std::vector<std::pair<int, int>> to_sorted(const LinkSet& links) {
    return {links.begin(), links.end()};
}

}  // namespace

SymHeuristic parse_heuristic(const std::string& name) {
    if (name == "intersect") return SymHeuristic::intersect;
    if (name == "union") return SymHeuristic::union_;
    if (name == "gdfa") return SymHeuristic::gdfa;
    fail("config.invalid", "unknown symmetrisation heuristic \"" + name +
                               "\" (expected intersect|union|gdfa)");
}

std::string heuristic_name(SymHeuristic h) {
    switch (h) {
        case SymHeuristic::intersect: return "intersect";
        case SymHeuristic::union_: return "union";
        case SymHeuristic::gdfa: return "gdfa";
    }
    return "gdfa";
}

SymmetrisedAlignment link_intersection(const DirectionalAlignment& fwd,
                                       const DirectionalAlignment& rev) {
    check_sentence_counts(fwd, rev);
    SymmetrisedAlignment out;
    out.sentences.resize(fwd.sentences.size());
    for (size_t s = 0; s < fwd.sentences.size(); ++s) {
        LinkSet f = fwd_links(fwd.sentences[s]);
        LinkSet r = rev_links(rev.sentences[s]);
        LinkSet both;
        for (const auto& link : f)
            if (r.count(link)) both.insert(link);
        out.sentences[s] = to_sorted(both);
    }
    return out;
}

SymmetrisedAlignment link_union(const DirectionalAlignment& fwd, const DirectionalAlignment& rev) {
    check_sentence_counts(fwd, rev);
    SymmetrisedAlignment out;
    out.sentences.resize(fwd.sentences.size());
    for (size_t s = 0; s < fwd.sentences.size(); ++s) {
        LinkSet all = fwd_links(fwd.sentences[s]);
        LinkSet r = rev_links(rev.sentences[s]);
        all.insert(r.begin(), r.end());
        out.sentences[s] = to_sorted(all);
    }
    return out;
}

SymmetrisedAlignment grow_diag_final_and(const DirectionalAlignment& fwd,
                                         const DirectionalAlignment& rev,
                                         const std::vector<int>& src_lens,
                                         const std::vector<int>& tgt_lens) {
    check_sentence_counts(fwd, rev);
    if (src_lens.size() != fwd.sentences.size() || tgt_lens.size() != fwd.sentences.size())
        fail("data.sentence-count-mismatch", "length vectors do not match the alignment");

    SymmetrisedAlignment out;
    out.sentences.resize(fwd.sentences.size());
    for (size_t s = 0; s < fwd.sentences.size(); ++s) {
        const int src_len = src_lens[s];
        const int tgt_len = tgt_lens[s];
        LinkSet f = fwd_links(fwd.sentences[s]);
        LinkSet r = rev_links(rev.sentences[s]);
        LinkSet uni = f;
        uni.insert(r.begin(), r.end());
        LinkSet current;
        for (const auto& link : f)
            if (r.count(link)) current.insert(link);

        std::vector<bool> src_aligned(src_len, false), tgt_aligned(tgt_len, false);
        for (const auto& [i, j] : current) {
            src_aligned[i] = true;
            tgt_aligned[j] = true;
        }

        // grow-diag: extend into union links adjacent to an existing link
        bool changed = true;
        while (changed) {
            changed = false;
            for (int j = 0; j < tgt_len; ++j) {
                for (int i = 0; i < src_len; ++i) {
                    if (!current.count({i, j})) continue;
                    for (int dj = -1; dj <= 1; ++dj) {
                        for (int di = -1; di <= 1; ++di) {
                            if (di == 0 && dj == 0) continue;
                            int ni = i + di, nj = j + dj;
                            if (ni < 0 || nj < 0 || ni >= src_len || nj >= tgt_len) continue;
                            if (src_aligned[ni] && tgt_aligned[nj]) continue;
                            if (!uni.count({ni, nj}) || current.count({ni, nj})) continue;
                            current.emplace(ni, nj);
                            src_aligned[ni] = true;
                            tgt_aligned[nj] = true;
                            changed = true;
                        }
                    }
                }
            }
        }

        // final-and: union links whose endpoints are both unaligned
        for (int j = 0; j < tgt_len; ++j) {
            for (int i = 0; i < src_len; ++i) {
                if (!uni.count({i, j}) || current.count({i, j})) continue;
                if (src_aligned[i] || tgt_aligned[j]) continue;
                current.emplace(i, j);
                src_aligned[i] = true;
                tgt_aligned[j] = true;
            }
        }
        out.sentences[s] = to_sorted(current);
    }
    return out;
}

SymmetrisedAlignment symmetrise(const DirectionalAlignment& fwd, const DirectionalAlignment& rev,
                                const std::vector<int>& src_lens, const std::vector<int>& tgt_lens,
                                SymHeuristic heuristic) {
    switch (heuristic) {
        case SymHeuristic::intersect: return link_intersection(fwd, rev);
        case SymHeuristic::union_: return link_union(fwd, rev);
        case SymHeuristic::gdfa: return grow_diag_final_and(fwd, rev, src_lens, tgt_lens);
    }
    return link_intersection(fwd, rev);
}

void write_pharaoh(const SymmetrisedAlignment& alignment, const std::string& path) {
    std::ostringstream out;
    for (const auto& links : alignment.sentences) {
        for (size_t k = 0; k < links.size(); ++k) {
            if (k) out << ' ';
            out << links[k].first << '-' << links[k].second;
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

}  // namespace alignability
