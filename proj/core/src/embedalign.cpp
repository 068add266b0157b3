#include "alignability/embedalign.hpp"

#include <cmath>
#include <sstream>

#include "alignability/error.hpp"
#include "alignability/util.hpp"

namespace alignability {

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

void check_pair(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt) {
    if (src.rows.size() != tgt.rows.size())
        fail("data.row-count-mismatch", "embedding row counts differ: " +
                                            std::to_string(src.rows.size()) + " vs " +
                                            std::to_string(tgt.rows.size()));
    if (src.rows.size() < 2)
        fail("data.too-few-rows", "retrieval needs at least 2 parallel rows");
    if (src.dim() != tgt.dim()) fail("data.dim-mismatch", "embedding dimensions differ");
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::string& path, const std::string& lang) {
    EmbeddingMatrix m;
    m.lang = lang;
    std::vector<std::string> lines = read_lines(path);
    size_t declared_dim = 0;
    size_t start = 0;
    if (!lines.empty() && lines[0].rfind("#dim=", 0) == 0) {
        std::optional<long long> d = parse_int(lines[0].substr(5));
        if (!d || *d < 1) fail("data.embeddings", path + " line 1: bad #dim header");
        declared_dim = static_cast<size_t>(*d);
        start = 1;
    }
    for (size_t i = start; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<double> row;
        for (const auto& field : split_whitespace(lines[i])) {
            bool ok = false;
            double v = parse_double(field, ok);
            if (!ok || !std::isfinite(v))
                fail("data.embeddings", path + " row " + std::to_string(i + 1) +
                                            ": bad value \"" + field + "\"");
            row.push_back(v);
        }
        if (row.empty())
            fail("data.embeddings", path + " row " + std::to_string(i + 1) + ": empty row");
        if (!m.rows.empty() && row.size() != m.rows[0].size())
            fail("data.embeddings", path + " row " + std::to_string(i + 1) + ": ragged row (" +
                                        std::to_string(row.size()) + " vs " +
                                        std::to_string(m.rows[0].size()) + " values)");
        if (declared_dim && row.size() != declared_dim)
            fail("data.embeddings", path + " row " + std::to_string(i + 1) +
                                        ": dimension does not match #dim header");
        m.rows.push_back(std::move(row));
    }
    if (m.rows.empty()) fail("data.embeddings", path + ": no embedding rows");
    return m;
}

RetrievalScores retrieval_scores(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt) {
    check_pair(src, tgt);
    const size_t n = src.rows.size();

    auto directional = [n](const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
        size_t hits = 0;
        for (size_t i = 0; i < n; ++i) {
            double best = -2.0;
            size_t best_j = 0;
            bool tie = false;
            for (size_t j = 0; j < n; ++j) {
                double c = cosine(a.rows[i], b.rows[j]);
                if (c > best) {
                    best = c;
                    best_j = j;
                    tie = false;
                } else if (c == best) {
                    tie = true;
                }
            }
            if (!tie && best_j == i) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(n);
    };

    RetrievalScores out;
    out.acc_fwd = directional(src, tgt);
    out.acc_rev = directional(tgt, src);
    out.f1 = (out.acc_fwd == 0.0 || out.acc_rev == 0.0)
                 ? 0.0
                 : 2.0 * out.acc_fwd * out.acc_rev / (out.acc_fwd + out.acc_rev);
    return out;
}

double average_margin(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                      bool mean_distractor) {
    check_pair(src, tgt);
    const size_t n = src.rows.size();
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double gold = cosine(src.rows[i], tgt.rows[i]);
        double best = -2.0;
        double sum = 0.0;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double c = cosine(src.rows[i], tgt.rows[j]);
            best = std::max(best, c);
            sum += c;
        }
        double distractor = mean_distractor ? sum / static_cast<double>(n - 1) : best;
        total += gold - distractor;
    }
    return total / static_cast<double>(n);
}

std::string render_embedding_csv(const std::vector<EmbedPairMetrics>& rows, uint64_t seed) {
    std::ostringstream out;
    out << "#seed=" << seed << "\n";
    out << "src,tgt,acc_fwd,acc_rev,f1,avg_margin,n\n";
    for (const auto& r : rows)
        out << r.src << ',' << r.tgt << ',' << format_fixed(r.acc_fwd, 6) << ','
            << format_fixed(r.acc_rev, 6) << ',' << format_fixed(r.f1, 6) << ','
            << format_fixed(r.avg_margin, 6) << ',' << r.n << '\n';
    return out.str();
}

std::vector<EmbedPairMetrics> parse_embedding_csv(const std::string& text) {
    std::vector<EmbedPairMetrics> rows;
    bool header_seen = false;
    size_t lineno = 0;
    for (const auto& line : split(text, '\n')) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "src,tgt,acc_fwd,acc_rev,f1,avg_margin,n")
                fail("data.embedding-csv", "line " + std::to_string(lineno) + ": bad header");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 7)
            fail("data.embedding-csv", "line " + std::to_string(lineno) + ": expected 7 columns");
        EmbedPairMetrics m;
        m.src = cols[0];
        m.tgt = cols[1];
        bool ok1 = false, ok2 = false, ok3 = false, ok4 = false;
        m.acc_fwd = parse_double(cols[2], ok1);
        m.acc_rev = parse_double(cols[3], ok2);
        m.f1 = parse_double(cols[4], ok3);
        m.avg_margin = parse_double(cols[5], ok4);
        std::optional<long long> n = parse_int(cols[6]);
        if (!ok1 || !ok2 || !ok3 || !ok4 || !n || *n < 0)
            fail("data.embedding-csv", "line " + std::to_string(lineno) + ": bad number");
        m.n = static_cast<size_t>(*n);
        rows.push_back(std::move(m));
    }
    if (!header_seen) fail("data.embedding-csv", "missing header line");
    return rows;
}

}  // namespace alignability
