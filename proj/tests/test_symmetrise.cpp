#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "alignability/error.hpp"
#include "alignability/symmetrise.hpp"
#include "gdfa_reference.hpp"
#include "test_util.hpp"

using namespace alignability;

namespace {

// fwd links are (src,tgt); rev alignments store links in their own
// (tgt,src) roles, so building one swaps the given (src,tgt) pairs
DirectionalAlignment directional(const std::vector<std::pair<int, int>>& links, bool swap) {
    DirectionalAlignment a;
    a.sentences.resize(1);
    for (auto [i, j] : links)
        a.sentences[0].links.emplace_back(swap ? j : i, swap ? i : j);
    std::sort(a.sentences[0].links.begin(), a.sentences[0].links.end());
    return a;
}

std::vector<std::pair<int, int>> links_from_mask(unsigned mask, int src_len, int tgt_len) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < src_len; ++i)
        for (int j = 0; j < tgt_len; ++j)
            if (mask & (1u << (i * tgt_len + j))) out.emplace_back(i, j);
    return out;
}

}  // namespace

TEST_CASE("intersection, union and their edge cases") {
    DirectionalAlignment fwd = directional({{0, 0}, {1, 1}}, false);
    DirectionalAlignment rev = directional({{0, 0}}, true);

    CHECK(link_intersection(fwd, rev).sentences[0] ==
          std::vector<std::pair<int, int>>{{0, 0}});
    CHECK(link_union(fwd, rev).sentences[0] ==
          std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});

    SUBCASE("identical inputs are a fixed point") {
        DirectionalAlignment rev_same = directional({{0, 0}, {1, 1}}, true);
        CHECK(link_intersection(fwd, rev_same).sentences[0] == fwd.sentences[0].links);
        CHECK(link_union(fwd, rev_same).sentences[0] == fwd.sentences[0].links);
    }
    SUBCASE("disjoint sets") {
        DirectionalAlignment rev_disjoint = directional({{1, 0}}, true);
        CHECK(link_intersection(fwd, rev_disjoint).sentences[0].empty());
    }
    SUBCASE("one side empty") {
        DirectionalAlignment empty = directional({}, true);
        CHECK(link_union(fwd, empty).sentences[0] == fwd.sentences[0].links);
    }
    SUBCASE("sentence count mismatch is an error") {
        DirectionalAlignment two;
        two.sentences.resize(2);
        CHECK_THROWS_AS(link_intersection(fwd, two), Error);
    }
}

TEST_CASE("gdfa hand-traced examples") {
    SUBCASE("fwd == rev is returned unchanged") {
        DirectionalAlignment fwd = directional({{0, 0}, {1, 1}}, false);
        DirectionalAlignment rev = directional({{0, 0}, {1, 1}}, true);
        CHECK(grow_diag_final_and(fwd, rev, {2}, {2}).sentences[0] == fwd.sentences[0].links);
    }
    SUBCASE("diagonal growth from the intersection") {
        DirectionalAlignment fwd = directional({{0, 0}, {1, 1}}, false);
        DirectionalAlignment rev = directional({{0, 0}}, true);
        CHECK(grow_diag_final_and(fwd, rev, {2}, {2}).sentences[0] ==
              std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    }
    SUBCASE("empty intersection falls through to final-and") {
        DirectionalAlignment fwd = directional({{0, 0}}, false);
        DirectionalAlignment rev = directional({{1, 1}}, true);
        CHECK(grow_diag_final_and(fwd, rev, {2}, {2}).sentences[0] ==
              std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    }
}

TEST_CASE("gdfa matches the independent reference exhaustively on 2x2") {
    for (unsigned fm = 0; fm < 16; ++fm) {
        for (unsigned rm = 0; rm < 16; ++rm) {
            auto fwd_links = links_from_mask(fm, 2, 2);
            auto rev_links = links_from_mask(rm, 2, 2);
            DirectionalAlignment fwd = directional(fwd_links, false);
            DirectionalAlignment rev = directional(rev_links, true);
            auto got = grow_diag_final_and(fwd, rev, {2}, {2}).sentences[0];
            auto want = gdfa_reference(fwd_links, rev_links, 2, 2);
            CAPTURE(fm);
            CAPTURE(rm);
            REQUIRE(got == want);
        }
    }
}

TEST_CASE("gdfa matches the independent reference on sampled 3x3 instances") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20000; ++trial) {
        unsigned fm = static_cast<unsigned>(rng() & 0x1ff);
        unsigned rm = static_cast<unsigned>(rng() & 0x1ff);
        auto fwd_links = links_from_mask(fm, 3, 3);
        auto rev_links = links_from_mask(rm, 3, 3);
        DirectionalAlignment fwd = directional(fwd_links, false);
        DirectionalAlignment rev = directional(rev_links, true);
        auto got = grow_diag_final_and(fwd, rev, {3}, {3}).sentences[0];
        auto want = gdfa_reference(fwd_links, rev_links, 3, 3);
        CAPTURE(fm);
        CAPTURE(rm);
        REQUIRE(got == want);
    }
}

TEST_CASE("intersection subset gdfa subset union on random instances") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 2000; ++trial) {
        int src_len = 1 + static_cast<int>(rng() % 6);
        int tgt_len = 1 + static_cast<int>(rng() % 6);
        std::vector<std::pair<int, int>> fwd_links, rev_links;
        for (int i = 0; i < src_len; ++i)
            for (int j = 0; j < tgt_len; ++j) {
                if (rng() % 3 == 0) fwd_links.emplace_back(i, j);
                if (rng() % 3 == 0) rev_links.emplace_back(i, j);
            }
        DirectionalAlignment fwd = directional(fwd_links, false);
        DirectionalAlignment rev = directional(rev_links, true);

        auto inter = link_intersection(fwd, rev).sentences[0];
        auto gdfa = grow_diag_final_and(fwd, rev, {src_len}, {tgt_len}).sentences[0];
        auto uni = link_union(fwd, rev).sentences[0];

        CHECK(std::includes(gdfa.begin(), gdfa.end(), inter.begin(), inter.end()));
        CHECK(std::includes(uni.begin(), uni.end(), gdfa.begin(), gdfa.end()));
    }
}

TEST_CASE("gdfa is idempotent when re-fed as both directions") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        auto fwd_links = links_from_mask(static_cast<unsigned>(rng() & 0x1ff), 3, 3);
        auto rev_links = links_from_mask(static_cast<unsigned>(rng() & 0x1ff), 3, 3);
        DirectionalAlignment fwd = directional(fwd_links, false);
        DirectionalAlignment rev = directional(rev_links, true);
        auto once = grow_diag_final_and(fwd, rev, {3}, {3}).sentences[0];

        DirectionalAlignment again_fwd = directional(once, false);
        DirectionalAlignment again_rev = directional(once, true);
        auto twice = grow_diag_final_and(again_fwd, again_rev, {3}, {3}).sentences[0];
        REQUIRE(twice == once);
    }
}

TEST_CASE("symmetrised pharaoh output") {
    TempDir tmp("sym");
    SymmetrisedAlignment sym;
    sym.sentences = {{{0, 0}, {2, 1}}, {}};
    write_pharaoh(sym, tmp.file("s.txt"));
    CHECK(slurp(tmp.file("s.txt")) == "0-0 2-1\n\n");
}
