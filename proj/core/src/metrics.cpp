#include "alignability/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alignability/error.hpp"
#include "alignability/util.hpp"

namespace alignability {

TokenDistribution token_distribution(const TokenisedCorpus& corpus) {
    TokenDistribution dist;
    dist.lang = corpus.lang;
    std::map<std::string, long long> counts;
    long long total = 0;
    for (const auto& sent : corpus.sentences)
        for (const auto& tok : sent) {
            ++counts[tok];
            ++total;
        }
    if (total == 0) fail("data.empty-corpus", "token distribution over a corpus with no tokens");
    for (const auto& [tok, count] : counts)
        dist.probs[tok] = static_cast<double>(count) / static_cast<double>(total);
    return dist;
}

double jsd(const TokenDistribution& p, const TokenDistribution& q) {
    // single pass over the sorted union support keeps evaluation symmetric
    double kl_p = 0.0, kl_q = 0.0;
    auto ip = p.probs.begin();
    auto iq = q.probs.begin();
    while (ip != p.probs.end() || iq != q.probs.end()) {
        double pv = 0.0, qv = 0.0;
        if (iq == q.probs.end() || (ip != p.probs.end() && ip->first < iq->first)) {
            pv = ip->second;
            ++ip;
        } else if (ip == p.probs.end() || iq->first < ip->first) {
            qv = iq->second;
            ++iq;
        } else {
            pv = ip->second;
            qv = iq->second;
            ++ip;
            ++iq;
        }
        double m = 0.5 * (pv + qv);
        if (pv > 0) kl_p += pv * std::log2(pv / m);
        if (qv > 0) kl_q += qv * std::log2(qv / m);
    }
    double v = 0.5 * kl_p + 0.5 * kl_q;
    return std::clamp(v, 0.0, 1.0);
}

std::pair<double, double> one_to_one_proportion(const SymmetrisedAlignment& sym,
                                                const TokenisedCorpus& src_side,
                                                const TokenisedCorpus& tgt_side) {
    if (sym.sentences.size() != src_side.sentences.size() ||
        sym.sentences.size() != tgt_side.sentences.size())
        fail("data.sentence-count-mismatch", "alignment and corpus sentence counts differ");

    long long fwd_hits = 0, rev_hits = 0;
    long long src_total = 0, tgt_total = 0;
    for (size_t s = 0; s < sym.sentences.size(); ++s) {
        const auto& links = sym.sentences[s];
        const size_t src_len = src_side.sentences[s].size();
        const size_t tgt_len = tgt_side.sentences[s].size();
        src_total += static_cast<long long>(src_len);
        tgt_total += static_cast<long long>(tgt_len);

        std::vector<int> src_deg(src_len, 0), tgt_deg(tgt_len, 0);
        for (const auto& [i, j] : links) {
            ++src_deg[i];
            ++tgt_deg[j];
        }
        for (const auto& [i, j] : links) {
            if (src_deg[i] == 1 && tgt_deg[j] == 1) {
                ++fwd_hits;
                ++rev_hits;
            }
        }
    }
    double fwd = src_total ? static_cast<double>(fwd_hits) / static_cast<double>(src_total) : 0.0;
    double rev = tgt_total ? static_cast<double>(rev_hits) / static_cast<double>(tgt_total) : 0.0;
    return {fwd, rev};
}

double alignability_score(const DirectionalAlignment& fwd, const DirectionalAlignment& rev,
                          size_t fwd_decisions, size_t rev_decisions) {
    if (fwd.sentences.size() != rev.sentences.size())
        fail("data.sentence-count-mismatch", "directional alignments have different sentence counts");
    if (fwd_decisions == 0 || rev_decisions == 0)
        fail("data.zero-decisions", "alignability score over zero alignment decisions");
    double fwd_sum = 0.0, rev_sum = 0.0;
    for (const auto& sent : fwd.sentences) fwd_sum += sent.score;
    for (const auto& sent : rev.sentences) rev_sum += sent.score;
    double cost_fwd = -fwd_sum / static_cast<double>(fwd_decisions);
    double cost_rev = -rev_sum / static_cast<double>(rev_decisions);
    return 0.5 * (cost_fwd + cost_rev);
}

double alignability_score(const DirectionalAlignment& fwd, const DirectionalAlignment& rev) {
    // each target position is one link-or-NULL decision
    size_t fwd_decisions = 0, rev_decisions = 0;
    for (const auto& sent : fwd.sentences)
        fwd_decisions += sent.links.size() + sent.null_aligned.size();
    for (const auto& sent : rev.sentences)
        rev_decisions += sent.links.size() + sent.null_aligned.size();
    return alignability_score(fwd, rev, fwd_decisions, rev_decisions);
}

std::string render_metrics_csv(const std::vector<PairMetrics>& rows, uint64_t seed) {
    std::ostringstream out;
    out << "#seed=" << seed << "\n#normalisation=per-decision\n";
    out << "src,tgt,jsd,one_to_one_fwd,one_to_one_rev,alignability\n";
    for (const auto& r : rows)
        out << r.src << ',' << r.tgt << ',' << format_fixed(r.jsd, 6) << ','
            << format_fixed(r.one_to_one_fwd, 6) << ',' << format_fixed(r.one_to_one_rev, 6)
            << ',' << format_fixed(r.alignability, 6) << '\n';
    return out.str();
}

std::vector<PairMetrics> parse_metrics_csv(const std::string& text) {
    std::vector<PairMetrics> rows;
    bool header_seen = false;
    size_t lineno = 0;
    for (const auto& line : split(text, '\n')) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "src,tgt,jsd,one_to_one_fwd,one_to_one_rev,alignability")
                fail("data.metrics-csv", "line " + std::to_string(lineno) + ": bad header");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 6)
            fail("data.metrics-csv", "line " + std::to_string(lineno) + ": expected 6 columns");
        PairMetrics m;
        m.src = cols[0];
        m.tgt = cols[1];
        bool ok1 = false, ok2 = false, ok3 = false, ok4 = false;
        m.jsd = parse_double(cols[2], ok1);
        m.one_to_one_fwd = parse_double(cols[3], ok2);
        m.one_to_one_rev = parse_double(cols[4], ok3);
        m.alignability = parse_double(cols[5], ok4);
        if (!ok1 || !ok2 || !ok3 || !ok4)
            fail("data.metrics-csv", "line " + std::to_string(lineno) + ": bad number");
        rows.push_back(std::move(m));
    }
    if (!header_seen) fail("data.metrics-csv", "missing header line");
    return rows;
}

}  // namespace alignability
