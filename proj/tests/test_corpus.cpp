#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alignability/corpus.hpp"
#include "alignability/error.hpp"
#include "test_util.hpp"

using namespace alignability;

TEST_CASE("load_parallel_corpus mirrors two small files") {
    TempDir tmp("corpus");
    std::string src = write_tmp(tmp, "a.txt", "hello world\nsecond line\n");
    std::string tgt = write_tmp(tmp, "b.txt", "hallo welt\nzweite zeile\n");
    ParallelCorpus c = load_parallel_corpus(src, tgt);
    REQUIRE(c.pairs.size() == 2);
    CHECK(c.pairs[0].src == "hello world");
    CHECK(c.pairs[0].tgt == "hallo welt");
    CHECK(c.pairs[1].index == 1);
}

TEST_CASE("max_pairs truncates to the first lines") {
    TempDir tmp("corpus");
    std::string a, b;
    for (int i = 0; i < 40; ++i) {
        a += "s" + std::to_string(i) + "\n";
        b += "t" + std::to_string(i) + "\n";
    }
    std::string src = write_tmp(tmp, "a.txt", a);
    std::string tgt = write_tmp(tmp, "b.txt", b);
    ParallelCorpus full = load_parallel_corpus(src, tgt);
    ParallelCorpus cut = load_parallel_corpus(src, tgt, 25);
    REQUIRE(cut.pairs.size() == 25);
    for (size_t i = 0; i < cut.pairs.size(); ++i) {
        CHECK(cut.pairs[i].src == full.pairs[i].src);
        CHECK(cut.pairs[i].tgt == full.pairs[i].tgt);
    }
}

TEST_CASE("line-count mismatch is a hard error naming both counts") {
    TempDir tmp("corpus");
    std::string src = write_tmp(tmp, "a.txt", "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n");
    std::string tgt = write_tmp(tmp, "b.txt", "1\n2\n3\n4\n5\n6\n7\n8\n9\n");
    try {
        load_parallel_corpus(src, tgt);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.category() == "io.line-count-mismatch");
        CHECK(std::string(e.what()).find("line-count mismatch 10 vs 9") != std::string::npos);
    }
}

TEST_CASE("invalid UTF-8 reports the line number") {
    TempDir tmp("corpus");
    std::string src = write_tmp(tmp, "a.txt", "fine\n\xff\xfe broken\n");
    std::string tgt = write_tmp(tmp, "b.txt", "ok\nok\n");
    try {
        load_parallel_corpus(src, tgt);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.category() == "io.invalid-utf8");
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("empty lines are legal sentences") {
    TempDir tmp("corpus");
    std::string src = write_tmp(tmp, "a.txt", "one\n\nthree\n");
    std::string tgt = write_tmp(tmp, "b.txt", "\ntwo\n\n");
    ParallelCorpus c = load_parallel_corpus(src, tgt);
    REQUIRE(c.pairs.size() == 3);
    CHECK(c.pairs[1].src.empty());
    CHECK(c.pairs[0].tgt.empty());
}

TEST_CASE("loading the same files twice is byte-stable") {
    TempDir tmp("corpus");
    std::string src = write_tmp(tmp, "a.txt", "a b\nc\n");
    std::string tgt = write_tmp(tmp, "b.txt", "x\ny z\n");
    ParallelCorpus c1 = load_parallel_corpus(src, tgt);
    ParallelCorpus c2 = load_parallel_corpus(src, tgt);
    REQUIRE(c1.pairs.size() == c2.pairs.size());
    for (size_t i = 0; i < c1.pairs.size(); ++i) {
        CHECK(c1.pairs[i].src == c2.pairs[i].src);
        CHECK(c1.pairs[i].tgt == c2.pairs[i].tgt);
    }
}

TEST_CASE("metadata parsing and errors") {
    TempDir tmp("meta");
    SUBCASE("well-formed row") {
        std::string path = write_tmp(tmp, "m.tsv",
                                     "#unit=lines\nhi\tDevanagari\tIndo-European\t123\n");
        MetadataTable t = load_language_metadata(path);
        REQUIRE(t.entries.size() == 1);
        CHECK(t.unit == SizeUnit::lines);
        CHECK(t.entries[0].script == "Devanagari");
        CHECK(t.entries[0].family == "Indo-European");
        CHECK(t.entries[0].data_size == 123);
    }
    SUBCASE("duplicate code rejected") {
        std::string path = write_tmp(
            tmp, "m.tsv", "#unit=bytes\nen\tLatin\tIndo-European\t1\nen\tLatin\tIndo-European\t2\n");
        CHECK_THROWS_AS(load_language_metadata(path), Error);
    }
    SUBCASE("non-numeric size rejected with line number") {
        std::string path =
            write_tmp(tmp, "m.tsv", "#unit=bytes\nen\tLatin\tIndo-European\tmany\n");
        try {
            load_language_metadata(path);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("missing column rejected") {
        std::string path = write_tmp(tmp, "m.tsv", "#unit=bytes\nen\tLatin\t1\n");
        CHECK_THROWS_AS(load_language_metadata(path), Error);
    }
    SUBCASE("missing unit header rejected") {
        std::string path = write_tmp(tmp, "m.tsv", "en\tLatin\tIndo-European\t1\n");
        CHECK_THROWS_AS(load_language_metadata(path), Error);
    }
}

TEST_CASE("pair grouping against the bundled language table") {
    MetadataTable t = load_language_metadata(std::string(DATA_DIR) + "/languages.tsv");
    REQUIRE(t.entries.size() == 20);

    GroupLabels hi_ur = pair_grouping("hi", "ur", t);
    CHECK_FALSE(hi_ur.same_script);  // Devanagari vs Arabic script
    CHECK(hi_ur.same_family);

    GroupLabels en_en = pair_grouping("en", "en", t);
    CHECK(en_en.same_script);
    CHECK(en_en.same_family);

    GroupLabels zh_ka = pair_grouping("zh", "ka", t);
    CHECK_FALSE(zh_ka.same_script);
    CHECK_FALSE(zh_ka.same_family);

    SUBCASE("symmetric in its arguments") {
        for (const auto& a : t.entries) {
            for (const auto& b : t.entries) {
                GroupLabels ab = pair_grouping(a.code, b.code, t);
                GroupLabels ba = pair_grouping(b.code, a.code, t);
                CHECK(ab.same_script == ba.same_script);
                CHECK(ab.same_family == ba.same_family);
            }
        }
    }

    SUBCASE("unknown code is a hard error") {
        CHECK_THROWS_AS(pair_grouping("en", "xx", t), Error);
    }
}
