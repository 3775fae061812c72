#pragma once

#include <clf/words.hpp>

#include <compare>
#include <memory>
#include <utility>
#include <vector>

namespace clf {

struct SolvableNF;
using NFPtr = std::shared_ptr<const SolvableNF>;

/// Canonical equality key for elements of the free solvable tower.
///
/// Depth 1 stores the abelianization vector. Depth d >= 2 stores a
/// wreath-product pair over depth d-1 keys: finitely many nonzero integer
/// lamp vectors indexed by depth d-1 keys, plus a cursor. Everything is
/// immutable after construction; equality of group elements is equality
/// of these structures.
struct SolvableNF {
    int rank = 1;
    int depth = 1;
    std::vector<Int> abelian;                             // depth == 1
    std::vector<std::pair<NFPtr, std::vector<Int>>> lamp; // depth >= 2; sorted, no zero vectors
    NFPtr cursor;                                         // depth >= 2
};

inline std::strong_ordering nf_compare(const SolvableNF& a, const SolvableNF& b) {
    if (auto c = a.rank <=> b.rank; c != 0) return c;
    if (auto c = a.depth <=> b.depth; c != 0) return c;
    if (a.depth == 1) {
        for (std::size_t i = 0; i < a.abelian.size(); ++i)
            if (auto c = a.abelian[i] <=> b.abelian[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
    if (auto c = nf_compare(*a.cursor, *b.cursor); c != 0) return c;
    if (auto c = a.lamp.size() <=> b.lamp.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.lamp.size(); ++i) {
        if (auto c = nf_compare(*a.lamp[i].first, *b.lamp[i].first); c != 0) return c;
        for (std::size_t j = 0; j < a.lamp[i].second.size(); ++j)
            if (auto c = a.lamp[i].second[j] <=> b.lamp[i].second[j]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

inline bool nf_equal(const SolvableNF& a, const SolvableNF& b) {
    return nf_compare(a, b) == 0;
}

inline bool nf_is_identity(const SolvableNF& a) {
    if (a.depth == 1) {
        for (Int v : a.abelian)
            if (v != 0) return false;
        return true;
    }
    return a.lamp.empty() && nf_is_identity(*a.cursor);
}

namespace detail {

// Group law on normal forms. Declared here so the group layer can call
// them; defined with the rest of the embedding machinery in magnus.hpp.
NFPtr nf_identity(int rank, int depth);
NFPtr nf_mul(const SolvableNF& a, const SolvableNF& b);
NFPtr nf_inv(const SolvableNF& a);
NFPtr nf_of_word(int rank, int depth, const ReducedWord& w);

} // namespace detail

} // namespace clf
