#pragma once

#include <clf/fox.hpp>
#include <clf/groups.hpp>
#include <clf/wreath.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

namespace clf {

namespace detail {

inline NFPtr make_nf(SolvableNF nf) {
    return std::make_shared<const SolvableNF>(std::move(nf));
}

struct NFPtrLess {
    bool operator()(const NFPtr& a, const NFPtr& b) const {
        return nf_compare(*a, *b) < 0;
    }
};

inline NFPtr nf_identity(int rank, int depth) {
    NFPtr child = depth >= 2 ? nf_identity(rank, depth - 1) : nullptr;
    static std::mutex m;
    static std::map<std::pair<int, int>, NFPtr> memo;
    std::lock_guard<std::mutex> lock(m);
    auto& slot = memo[{rank, depth}];
    if (!slot) {
        SolvableNF nf;
        nf.rank = rank;
        nf.depth = depth;
        if (depth == 1)
            nf.abelian.assign(rank, 0);
        else
            nf.cursor = child;
        slot = make_nf(std::move(nf));
    }
    return slot;
}

inline NFPtr nf_mul(const SolvableNF& a, const SolvableNF& b) {
    if (a.rank != b.rank || a.depth != b.depth)
        throw std::logic_error("nf_mul: mismatched tower coordinates");
    SolvableNF out;
    out.rank = a.rank;
    out.depth = a.depth;
    if (a.depth == 1) {
        out.abelian = a.abelian;
        for (std::size_t i = 0; i < out.abelian.size(); ++i) out.abelian[i] += b.abelian[i];
        return make_nf(std::move(out));
    }
    std::vector<std::pair<NFPtr, std::vector<Int>>> shifted;
    shifted.reserve(b.lamp.size());
    for (const auto& [key, val] : b.lamp)
        shifted.emplace_back(nf_mul(*a.cursor, *key), val);
    std::sort(shifted.begin(), shifted.end(), [](const auto& x, const auto& y) {
        return nf_compare(*x.first, *y.first) < 0;
    });
    auto p = a.lamp.begin();
    auto q = shifted.begin();
    auto nonzero = [](const std::vector<Int>& v) {
        for (Int x : v)
            if (x != 0) return true;
        return false;
    };
    while (p != a.lamp.end() || q != shifted.end()) {
        if (q == shifted.end() ||
            (p != a.lamp.end() && nf_compare(*p->first, *q->first) < 0)) {
            out.lamp.push_back(*p++);
        } else if (p == a.lamp.end() || nf_compare(*q->first, *p->first) < 0) {
            out.lamp.push_back(*q++);
        } else {
            std::vector<Int> sum = p->second;
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += q->second[i];
            if (nonzero(sum)) out.lamp.emplace_back(p->first, std::move(sum));
            ++p;
            ++q;
        }
    }
    out.cursor = nf_mul(*a.cursor, *b.cursor);
    return make_nf(std::move(out));
}

inline NFPtr nf_inv(const SolvableNF& a) {
    SolvableNF out;
    out.rank = a.rank;
    out.depth = a.depth;
    if (a.depth == 1) {
        out.abelian = a.abelian;
        for (auto& v : out.abelian) v = -v;
        return make_nf(std::move(out));
    }
    NFPtr cinv = nf_inv(*a.cursor);
    out.lamp.reserve(a.lamp.size());
    for (const auto& [key, val] : a.lamp) {
        std::vector<Int> neg = val;
        for (auto& v : neg) v = -v;
        out.lamp.emplace_back(nf_mul(*cinv, *key), std::move(neg));
    }
    std::sort(out.lamp.begin(), out.lamp.end(), [](const auto& x, const auto& y) {
        return nf_compare(*x.first, *y.first) < 0;
    });
    out.cursor = cinv;
    return make_nf(std::move(out));
}

struct WordNFMemo {
    std::mutex m;
    std::map<std::tuple<int, int, std::vector<int>>, NFPtr> map;
};
inline WordNFMemo& word_nf_memo() {
    static WordNFMemo memo;
    return memo;
}

inline NFPtr nf_of_word(int rank, int depth, const ReducedWord& w) {
    if (w.rank() != rank) throw input_error("nf_of_word: word rank mismatch");
    if (depth == 1) {
        SolvableNF nf;
        nf.rank = rank;
        nf.depth = 1;
        nf.abelian.assign(rank, 0);
        for (int letter : w.letters())
            nf.abelian[(letter > 0 ? letter : -letter) - 1] += letter > 0 ? 1 : -1;
        return make_nf(std::move(nf));
    }

    {
        auto& memo = word_nf_memo();
        std::lock_guard<std::mutex> lock(memo.m);
        auto it = memo.map.find({rank, depth, w.letters()});
        if (it != memo.map.end()) return it->second;
    }

    // Trace the path read by w through the Cayley graph of the depth d-1
    // quotient, netting signed crossings of the generator edges.
    std::vector<NFPtr> gen, gen_inv;
    for (int i = 1; i <= rank; ++i) {
        gen.push_back(nf_of_word(rank, depth - 1, ReducedWord::generator(rank, i)));
        gen_inv.push_back(nf_of_word(rank, depth - 1, ReducedWord::generator(rank, i, -1)));
    }
    NFPtr cursor = nf_identity(rank, depth - 1);
    std::map<NFPtr, std::vector<Int>, NFPtrLess> lamp;
    for (int letter : w.letters()) {
        int i = letter > 0 ? letter : -letter;
        if (letter > 0) {
            auto slot = lamp.try_emplace(cursor, std::vector<Int>(rank, 0));
            slot.first->second[i - 1] += 1;
            cursor = nf_mul(*cursor, *gen[i - 1]);
        } else {
            cursor = nf_mul(*cursor, *gen_inv[i - 1]);
            auto slot = lamp.try_emplace(cursor, std::vector<Int>(rank, 0));
            slot.first->second[i - 1] -= 1;
        }
    }
    SolvableNF out;
    out.rank = rank;
    out.depth = depth;
    for (auto& [key, val] : lamp) {
        bool nonzero = false;
        for (Int v : val)
            if (v != 0) { nonzero = true; break; }
        if (nonzero) out.lamp.emplace_back(key, std::move(val));
    }
    out.cursor = cursor;
    NFPtr result = make_nf(std::move(out));

    {
        auto& memo = word_nf_memo();
        std::lock_guard<std::mutex> lock(memo.m);
        memo.map.emplace(std::make_tuple(rank, depth, w.letters()), result);
    }
    return result;
}

} // namespace detail

// ---------------------------------------------------------------------------
// The embedding of F/N' into Z^r wr F/N, in both presentations.

/// Algebraic image: the quotient image together with the r starred Fox
/// derivatives, as exact group-ring coordinates.
struct MagnusImage {
    GroupElement quotient;
    std::vector<QuotientRing> coords;
};

inline bool operator==(const MagnusImage& a, const MagnusImage& b) {
    if (!(a.quotient == b.quotient) || a.coords.size() != b.coords.size()) return false;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
        if (!(a.coords[i] == b.coords[i])) return false;
    return true;
}

/// The quotient group F/N of the embedding with derived-series N; depth d
/// names S_{r,d}.
inline GroupOracle magnus_quotient_oracle(int rank, int depth, Caps caps = {}) {
    return GroupOracle(GroupDescriptor::free_solvable(rank, depth), caps);
}

inline MagnusImage magnus_algebraic(const ReducedWord& w, int rank, int depth,
                                    Caps caps = {}) {
    if (w.rank() != rank) throw input_error("magnus_algebraic: word rank mismatch");
    GroupOracle quotient = magnus_quotient_oracle(rank, depth, caps);
    MagnusImage img{quotient.from_word(w), {}};
    img.coords.reserve(rank);
    for (int i = 1; i <= rank; ++i) img.coords.push_back(fox_star(w, i, quotient));
    return img;
}

/// Geometric image: trace the path of w through the Cayley graph of the
/// quotient, accumulating the net number of signed crossings of each
/// generator edge into the lamp vector at the edge's tail.
inline WreathElement magnus_geometric(const ReducedWord& w, int rank, int depth,
                                      Caps caps = {}) {
    if (w.rank() != rank) throw input_error("magnus_geometric: word rank mismatch");
    GroupOracle base = magnus_quotient_oracle(rank, depth, caps);
    GroupOracle top(GroupDescriptor::free_abelian(rank), caps);

    GroupElement cursor = base.identity();
    std::map<GroupElement, std::vector<Int>> acc; // first-seen representative kept
    for (int letter : w.letters()) {
        int i = letter > 0 ? letter : -letter;
        if (letter > 0) {
            auto slot = acc.try_emplace(cursor, std::vector<Int>(rank, 0));
            slot.first->second[i - 1] += 1;
            cursor = base.mul(cursor, base.generator(i));
        } else {
            cursor = base.mul(cursor, base.generator(i, -1));
            auto slot = acc.try_emplace(cursor, std::vector<Int>(rank, 0));
            slot.first->second[i - 1] -= 1;
        }
    }
    std::vector<std::pair<GroupElement, GroupElement>> entries;
    for (auto& [key, val] : acc) {
        bool nonzero = false;
        for (Int v : val)
            if (v != 0) { nonzero = true; break; }
        if (nonzero) entries.emplace_back(key, GroupElement(top.descriptor(), val));
    }
    return {FinSuppMap::from_entries(base, top, std::move(entries)), std::move(cursor)};
}

/// Canonical form of a word in S_{r,d}. Geometric backend; equality of
/// the results is the decidable equality of the group.
inline GroupElement solvable_normal_form(const ReducedWord& w, int rank, int depth,
                                         Caps caps = {}) {
    return GroupOracle(GroupDescriptor::free_solvable(rank, depth), caps).from_word(w);
}

/// Image of an S_{r,d} element (d >= 2) in Z^r wr S_{r,d-1}.
inline WreathElement magnus_image(const GroupElement& g, Caps caps = {}) {
    const GroupDescriptor& d = g.group();
    if (d.kind != GroupKind::FreeSolvable || d.depth < 2)
        throw input_error("magnus_image: expected a free solvable element of depth >= 2");
    return magnus_geometric(g.word(), d.rank, d.depth - 1, caps);
}

/// Extract lamp coordinate i as a ring element over the base group, the
/// bridge between the two presentations.
inline QuotientRing lamp_coordinate_ring(const WreathElement& u, int i) {
    std::vector<QuotientRing::Term> terms;
    for (const auto& [key, val] : u.lamp.entries()) {
        Int c = val.vec()[static_cast<std::size_t>(i - 1)];
        if (c != 0) terms.emplace_back(key, c);
    }
    return QuotientRing::collect(OracleLaw{u.lamp.base()}, std::move(terms));
}

/// Net outflow of the lamp configuration at each vertex:
/// div(g) = sum_i f_i(g) - sum_i f_i(g x_i^-1). For the image of a word w
/// this is +1 at the identity, -1 at the endpoint, 0 elsewhere (0
/// everywhere when the endpoint is the identity).
inline std::vector<std::pair<GroupElement, Int>> divergence(const WreathElement& u) {
    const GroupOracle& base = u.lamp.base();
    int rank = u.lamp.top().generator_count();
    std::set<GroupElement> candidates;
    for (const auto& [key, val] : u.lamp.entries()) {
        candidates.insert(key);
        for (int i = 1; i <= rank; ++i) candidates.insert(base.mul(key, base.generator(i)));
    }
    std::vector<std::pair<GroupElement, Int>> out;
    for (const auto& g : candidates) {
        Int s = 0;
        GroupElement here = u.lamp.at(g);
        if (!u.lamp.top().is_identity(here))
            for (Int v : here.vec()) s += v;
        for (int i = 1; i <= rank; ++i) {
            GroupElement back = u.lamp.at(base.mul(g, base.generator(i, -1)));
            if (!u.lamp.top().is_identity(back)) s -= back.vec()[i - 1];
        }
        if (s != 0) out.emplace_back(g, s);
    }
    return out;
}

/// Distortion ceiling for cyclic subgroups of the solvable tower: 2n.
/// Doubling a length budget therefore makes power searches complete.
inline Int solvable_cyclic_distortion_bound(Int n) { return 2 * n; }

} // namespace clf
