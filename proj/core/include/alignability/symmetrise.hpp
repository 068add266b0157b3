#pragma once

#include <string>
#include <vector>

#include "alignability/aligner.hpp"

namespace alignability {

struct SymmetrisedAlignment {
    // per sentence, sorted (src index, tgt index) links
    std::vector<std::vector<std::pair<int, int>>> sentences;
};

enum class SymHeuristic { intersect, union_, gdfa };

SymHeuristic parse_heuristic(const std::string& name);  // intersect|union|gdfa
std::string heuristic_name(SymHeuristic h);

// Reverse-direction links are interpreted with roles swapped into
// (src, tgt) space. Sentence counts must match.
SymmetrisedAlignment link_intersection(const DirectionalAlignment& fwd,
                                       const DirectionalAlignment& rev);
SymmetrisedAlignment link_union(const DirectionalAlignment& fwd, const DirectionalAlignment& rev);

// Standard grow-diag-final-and: start from the intersection, grow along the
// 8-neighbourhood into union links where one endpoint is still unaligned
// (scanning in (tgt, src) order until fixpoint), then add union links whose
// endpoints are both unaligned.
SymmetrisedAlignment grow_diag_final_and(const DirectionalAlignment& fwd,
                                         const DirectionalAlignment& rev,
                                         const std::vector<int>& src_lens,
                                         const std::vector<int>& tgt_lens);

SymmetrisedAlignment symmetrise(const DirectionalAlignment& fwd, const DirectionalAlignment& rev,
                                const std::vector<int>& src_lens, const std::vector<int>& tgt_lens,
                                SymHeuristic heuristic);

void write_pharaoh(const SymmetrisedAlignment& alignment, const std::string& path);

}  // namespace alignability
