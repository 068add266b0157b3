#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "alignability/embedalign.hpp"
#include "alignability/error.hpp"
#include "test_util.hpp"

using namespace alignability;

namespace {

EmbeddingMatrix matrix_of(std::vector<std::vector<double>> rows) {
    EmbeddingMatrix m;
    m.rows = std::move(rows);
    return m;
}

EmbeddingMatrix random_matrix(std::mt19937_64& rng, size_t n, size_t dim) {
    EmbeddingMatrix m;
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> row(dim);
        for (size_t k = 0; k < dim; ++k)
            row[k] = static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
        m.rows.push_back(row);
    }
    return m;
}

}  // namespace

TEST_CASE("load_embeddings parses rows and validates") {
    TempDir tmp("emb");
    SUBCASE("3 lines of 4 floats") {
        std::string path =
            write_tmp(tmp, "e.txt", "1 0 0 0\n0 1 0 0\n0 0 0.5 0.5\n");
        EmbeddingMatrix m = load_embeddings(path);
        REQUIRE(m.rows.size() == 3);
        CHECK(m.dim() == 4);
        CHECK(m.rows[2][2] == 0.5);
    }
    SUBCASE("dim header is validated") {
        std::string ok = write_tmp(tmp, "ok.txt", "#dim=2\n1 0\n0 1\n");
        CHECK(load_embeddings(ok).dim() == 2);
        std::string bad = write_tmp(tmp, "bad.txt", "#dim=3\n1 0\n");
        CHECK_THROWS_AS(load_embeddings(bad), Error);
    }
    SUBCASE("nan is rejected with the row number") {
        std::string path = write_tmp(tmp, "nan.txt", "1 0\nnan 1\n");
        try {
            load_embeddings(path);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        }
    }
    SUBCASE("ragged rows are rejected") {
        std::string path = write_tmp(tmp, "rag.txt", "1 0\n1 0 0\n");
        CHECK_THROWS_AS(load_embeddings(path), Error);
    }
    SUBCASE("empty file is rejected") {
        std::string path = write_tmp(tmp, "empty.txt", "");
        CHECK_THROWS_AS(load_embeddings(path), Error);
    }
}

TEST_CASE("self-retrieval on distinct rows is perfect") {
    EmbeddingMatrix m = matrix_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
    RetrievalScores s = retrieval_scores(m, m);
    CHECK(s.acc_fwd == 1.0);
    CHECK(s.acc_rev == 1.0);
    CHECK(s.f1 == 1.0);
}

TEST_CASE("two swapped rows halve the accuracy") {
    EmbeddingMatrix src = matrix_of({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    EmbeddingMatrix tgt = matrix_of({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    RetrievalScores s = retrieval_scores(src, tgt);
    CHECK(s.acc_fwd == 0.5);
    CHECK(s.acc_rev == 0.5);
    CHECK(s.f1 == 0.5);
}

TEST_CASE("cosine ties count as retrieval failures") {
    // both target rows equal: every query ties between them
    EmbeddingMatrix src = matrix_of({{1, 0}, {0, 1}});
    EmbeddingMatrix tgt = matrix_of({{1, 1}, {1, 1}});
    RetrievalScores s = retrieval_scores(src, tgt);
    CHECK(s.acc_fwd == 0.0);
    CHECK(s.f1 == 0.0);
}

TEST_CASE("retrieval preconditions") {
    EmbeddingMatrix one = matrix_of({{1, 0}});
    CHECK_THROWS_AS(retrieval_scores(one, one), Error);
    EmbeddingMatrix two = matrix_of({{1, 0}, {0, 1}});
    EmbeddingMatrix three = matrix_of({{1, 0}, {0, 1}, {1, 1}});
    CHECK_THROWS_AS(retrieval_scores(two, three), Error);
}

TEST_CASE("average margin fixtures") {
    SUBCASE("identical orthonormal matrices give margin 1") {
        EmbeddingMatrix m = matrix_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
        CHECK(average_margin(m, m) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("identical target rows give margin 0") {
        EmbeddingMatrix src = matrix_of({{1, 0}, {0, 1}});
        EmbeddingMatrix tgt = matrix_of({{1, 2}, {1, 2}});
        CHECK(average_margin(src, tgt) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("hand-computed 2x2 case") {
        // unit vectors realising the cosine matrix [[0.9, 0.1], [0.2, 0.8]]:
        // margin = mean(0.9 - 0.1, 0.8 - 0.2) = 0.7
        EmbeddingMatrix src = matrix_of({{1, 0, 0, 0}, {0, 1, 0, 0}});
        EmbeddingMatrix tgt = matrix_of({{0.9, 0.2, std::sqrt(1 - 0.81 - 0.04), 0},
                                         {0.1, 0.8, 0, std::sqrt(1 - 0.01 - 0.64)}});
        CHECK(average_margin(src, tgt) == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("mean-distractor variant") {
        EmbeddingMatrix m = matrix_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
        CHECK(average_margin(m, m, true) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("scores are invariant under per-row positive rescaling") {
    std::mt19937_64 rng(20240818);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = 3 + rng() % 5;
        size_t dim = 2 + rng() % 6;
        EmbeddingMatrix src = random_matrix(rng, n, dim);
        EmbeddingMatrix tgt = random_matrix(rng, n, dim);
        EmbeddingMatrix src_scaled = src;
        EmbeddingMatrix tgt_scaled = tgt;
        for (size_t i = 0; i < n; ++i) {
            double a = 0.1 + static_cast<double>(rng() % 100) / 10.0;
            double b = 0.1 + static_cast<double>(rng() % 100) / 10.0;
            for (size_t k = 0; k < dim; ++k) {
                src_scaled.rows[i][k] *= a;
                tgt_scaled.rows[i][k] *= b;
            }
        }
        RetrievalScores s1 = retrieval_scores(src, tgt);
        RetrievalScores s2 = retrieval_scores(src_scaled, tgt_scaled);
        CHECK(s1.acc_fwd == doctest::Approx(s2.acc_fwd).epsilon(1e-9));
        CHECK(s1.f1 == doctest::Approx(s2.f1).epsilon(1e-9));
        CHECK(average_margin(src, tgt) ==
              doctest::Approx(average_margin(src_scaled, tgt_scaled)).epsilon(1e-9));
    }
}

TEST_CASE("permuting both matrices together changes nothing") {
    std::mt19937_64 rng(4);
    EmbeddingMatrix src = random_matrix(rng, 6, 4);
    EmbeddingMatrix tgt = random_matrix(rng, 6, 4);
    std::vector<size_t> perm = {3, 0, 5, 1, 4, 2};
    EmbeddingMatrix src_p, tgt_p;
    for (size_t i : perm) {
        src_p.rows.push_back(src.rows[i]);
        tgt_p.rows.push_back(tgt.rows[i]);
    }
    RetrievalScores s1 = retrieval_scores(src, tgt);
    RetrievalScores s2 = retrieval_scores(src_p, tgt_p);
    CHECK(s1.acc_fwd == s2.acc_fwd);
    CHECK(s1.acc_rev == s2.acc_rev);
    CHECK(average_margin(src, tgt) == doctest::Approx(average_margin(src_p, tgt_p)));
}

TEST_CASE("f1 is bounded by the directional accuracies") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        EmbeddingMatrix src = random_matrix(rng, 5, 3);
        EmbeddingMatrix tgt = random_matrix(rng, 5, 3);
        RetrievalScores s = retrieval_scores(src, tgt);
        CHECK(s.f1 >= 0.0);
        CHECK(s.f1 <= std::max(s.acc_fwd, s.acc_rev) + 1e-12);
    }
}

TEST_CASE("embedding CSV round-trip") {
    std::vector<EmbedPairMetrics> rows = {{"en", "de", 1.0, 0.5, 2.0 / 3.0, 0.25, 10}};
    std::string csv = render_embedding_csv(rows, 3);
    std::vector<EmbedPairMetrics> parsed = parse_embedding_csv(csv);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].tgt == "de");
    CHECK(parsed[0].n == 10);
    CHECK(parsed[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}
