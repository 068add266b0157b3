#pragma once

#include <string>
#include <vector>

namespace alignability {

struct EmbeddingMatrix {
    std::string lang;
    std::vector<std::vector<double>> rows;  // row n = sentence n

    size_t dim() const { return rows.empty() ? 0 : rows[0].size(); }
};

struct RetrievalScores {
    double acc_fwd = 0.0;
    double acc_rev = 0.0;
    double f1 = 0.0;  // harmonic mean of the two accuracies
};

// One vector per line, decimal floats separated by single spaces. An
// optional "#dim=<d>" header is validated if present.
EmbeddingMatrix load_embeddings(const std::string& path, const std::string& lang = "");

// Cosine nearest-neighbour retrieval by row index; ties count as failures.
RetrievalScores retrieval_scores(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt);

// Mean over rows of cos(src_i, tgt_i) minus the best (or, with
// mean_distractor, the mean) off-diagonal cosine.
double average_margin(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                      bool mean_distractor = false);

struct EmbedPairMetrics {
    std::string src;
    std::string tgt;
    double acc_fwd = 0.0;
    double acc_rev = 0.0;
    double f1 = 0.0;
    double avg_margin = 0.0;
    size_t n = 0;  // parallel rows used
};

std::string render_embedding_csv(const std::vector<EmbedPairMetrics>& rows, uint64_t seed);
std::vector<EmbedPairMetrics> parse_embedding_csv(const std::string& text);

}  // namespace alignability
