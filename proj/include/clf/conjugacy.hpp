#pragma once

#include <clf/magnus.hpp>
#include <clf/wreath.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace clf {

enum class Verdict { Yes, No, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

/// Conjugacy-length ceiling of a built-in group at total length n:
/// abelian groups need no conjugator at all, Perm3 is covered by its
/// diameter, and deep solvable towers by their cubic ceiling.
inline Int clf_upper_bound_for(const GroupOracle& A, Int n) {
    switch (A.descriptor().kind) {
    case GroupKind::FreeAbelian:
    case GroupKind::Cyclic: return 0;
    case GroupKind::Perm3: return 3;
    case GroupKind::FreeSolvable: {
        if (A.descriptor().depth == 1) return 0;
        __int128 v = static_cast<__int128>(n) * (16 * n + 8) * (16 * n + 1);
        if (v > std::numeric_limits<Int>::max())
            throw resource_error("conjugacy-length ceiling exceeds 64-bit integers");
        return static_cast<Int>(v);
    }
    }
    return 0;
}

namespace detail {

constexpr Int kUnbounded = std::numeric_limits<Int>::max() / 8;

/// Solve b^j = target with a bound that makes "none" a proof: exact for
/// abelian and finite oracles, distortion-doubled for the solvable tower.
inline std::optional<Int> power_index(const GroupOracle& G, const GroupElement& b,
                                      const GroupElement& target) {
    Int bound = kUnbounded;
    if (G.descriptor().kind == GroupKind::FreeSolvable && G.descriptor().depth >= 2)
        bound = solvable_cyclic_distortion_bound(G.word_length(target));
    return G.cyclic_power_solve(b, target, bound);
}

} // namespace detail

/// A finite point set split into right cosets of <b>. Every member is
/// b^exponent * rep; reps are the (shortest, canonically least) members
/// of their class.
struct CosetPartition {
    GroupElement b;
    std::optional<Int> order; // order of b; nullopt = infinite
    struct Coset {
        GroupElement rep;
        std::vector<std::pair<GroupElement, Int>> members; // (point, exponent)
    };
    std::vector<Coset> cosets;
};

inline CosetPartition coset_partition(const std::vector<GroupElement>& points,
                                      const GroupElement& b, const GroupOracle& G) {
    CosetPartition part{b, G.element_order(b), {}};
    std::set<GroupElement> dedup(points.begin(), points.end());
    for (const auto& p : dedup) {
        bool placed = false;
        for (auto& coset : part.cosets) {
            auto j = detail::power_index(G, b, G.mul(p, G.inv(coset.rep)));
            if (j) {
                coset.members.emplace_back(p, *j);
                placed = true;
                break;
            }
        }
        if (!placed) part.cosets.push_back({p, {{p, 0}}});
    }
    // Re-anchor each coset on its shortest member.
    for (auto& coset : part.cosets) {
        std::size_t best = 0;
        Int best_len = G.word_length(coset.members[0].first);
        for (std::size_t i = 1; i < coset.members.size(); ++i) {
            Int len = G.word_length(coset.members[i].first);
            if (len < best_len ||
                (len == best_len && coset.members[i].first < coset.members[best].first)) {
                best = i;
                best_len = len;
            }
        }
        Int shift = coset.members[best].second;
        coset.rep = coset.members[best].first;
        for (auto& [p, j] : coset.members) {
            j -= shift;
            if (part.order) j = ((j % *part.order) + *part.order) % *part.order;
        }
        std::sort(coset.members.begin(), coset.members.end(),
                  [](const auto& x, const auto& y) { return x.second < y.second; });
    }
    std::sort(part.cosets.begin(), part.cosets.end(),
              [](const auto& x, const auto& y) { return x.rep < y.rep; });
    return part;
}

/// The ordered product of f over the coset <b>rep, shifted by z:
/// factors f(z^-1 b^j rep) with higher j to the left. For finite order N
/// the product runs over j = N-1,...,0; for infinite order over the
/// finitely many j that hit the support.
inline GroupElement pi_product(const FinSuppMap& f, const CosetPartition& part,
                               std::size_t coset_index, const GroupElement& z) {
    const GroupOracle& B = f.base();
    const GroupOracle& A = f.top();
    const GroupElement& rep = part.cosets.at(coset_index).rep;
    GroupElement zinv = B.inv(z);
    if (part.order) {
        Int N = *part.order;
        GroupElement acc = A.identity();
        GroupElement key = rep; // b^j * rep, ascending j; multiply on the left
        for (Int j = 0; j < N; ++j) {
            acc = A.mul(f.at(B.mul(zinv, key)), acc);
            key = B.mul(part.b, key);
        }
        return acc;
    }
    std::vector<std::pair<Int, GroupElement>> hits;
    GroupElement rep_inv = B.inv(rep);
    for (const auto& [s, val] : f.entries()) {
        auto j = detail::power_index(B, part.b, B.mul(B.mul(z, s), rep_inv));
        if (j) hits.emplace_back(*j, val);
    }
    std::sort(hits.begin(), hits.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    GroupElement acc = A.identity();
    for (const auto& [j, val] : hits) acc = A.mul(acc, val);
    return acc;
}

/// The explicit conjugating lamp configuration for (f,b) ~ (g,c) at a
/// given z: on each coset, partial products of f times an optional alpha
/// times inverted partial products of the z-shift of g. Demands that the
/// per-coset matching condition holds (logic_error otherwise).
inline FinSuppMap build_conjugator_h(const FinSuppMap& f, const FinSuppMap& g,
                                     const GroupElement& b, const GroupElement& z,
                                     const CosetPartition& part,
                                     const std::vector<GroupElement>* alphas = nullptr) {
    const GroupOracle& B = f.base();
    const GroupOracle& A = f.top();
    GroupElement zinv = B.inv(z);
    std::vector<std::pair<GroupElement, GroupElement>> entries;

    for (std::size_t ci = 0; ci < part.cosets.size(); ++ci) {
        const GroupElement& rep = part.cosets[ci].rep;
        GroupElement rep_inv = B.inv(rep);
        if (part.order) {
            Int N = *part.order;
            GroupElement alpha = alphas ? alphas->at(ci) : A.identity();
            GroupElement F = A.identity(), G = A.identity();
            GroupElement key = rep;
            for (Int j = 0; j < N; ++j) {
                F = A.mul(f.at(key), F);
                G = A.mul(g.at(B.mul(zinv, key)), G);
                GroupElement h = A.mul(A.mul(F, alpha), A.inv(G));
                if (!A.is_identity(h)) entries.emplace_back(key, h);
                key = B.mul(b, key);
            }
            continue;
        }
        // Infinite order: the partial products change only at support hits.
        std::set<Int> js;
        for (const auto& [s, val] : f.entries()) {
            auto j = detail::power_index(B, b, B.mul(s, rep_inv));
            if (j) js.insert(*j);
        }
        for (const auto& [s, val] : g.entries()) {
            auto j = detail::power_index(B, b, B.mul(B.mul(z, s), rep_inv));
            if (j) js.insert(*j);
        }
        if (js.empty()) continue;
        Int jmin = *js.begin(), jmax = *js.rbegin();
        GroupElement F = A.identity(), G = A.identity();
        GroupElement key = B.mul(B.power(b, jmin), rep);
        for (Int j = jmin; j <= jmax; ++j) {
            F = A.mul(f.at(key), F);
            G = A.mul(g.at(B.mul(zinv, key)), G);
            GroupElement h = A.mul(F, A.inv(G));
            if (j < jmax) {
                if (!A.is_identity(h)) entries.emplace_back(key, h);
            } else if (!A.is_identity(h)) {
                throw std::logic_error(
                    "build_conjugator_h: pi-matching condition violated");
            }
            key = B.mul(b, key);
        }
    }
    return FinSuppMap::from_entries(B, A, std::move(entries));
}

/// If every pi-product of f vanishes, the lamp configuration h with
/// (f,b)(h,e) = (h,e)(1,b); otherwise nothing.
inline std::optional<FinSuppMap> trivialization_conjugator(const FinSuppMap& f,
                                                           const GroupElement& b,
                                                           const CosetPartition& part) {
    const GroupOracle& B = f.base();
    GroupElement e = B.identity();
    for (std::size_t ci = 0; ci < part.cosets.size(); ++ci)
        if (!f.top().is_identity(pi_product(f, part, ci, e))) return std::nullopt;
    FinSuppMap trivial(B, f.top());
    return build_conjugator_h(f, trivial, b, e, part);
}

inline bool verify_conjugator(const WreathElement& u, const WreathElement& v,
                              const WreathElement& gamma) {
    check_same_wreath(u, v);
    check_same_wreath(u, gamma);
    return wreath_mul(u, gamma) == wreath_mul(gamma, v);
}

inline bool verify_conjugator(const GroupElement& u, const GroupElement& v,
                              const GroupElement& gamma) {
    if (!(u.group() == v.group()) || !(u.group() == gamma.group()))
        throw input_error("verify_conjugator: mixed groups");
    GroupOracle G(u.group());
    return G.mul(u, gamma) == G.mul(gamma, v);
}

/// True when every pi-product of the lamp configuration of u (over
/// cursor cosets) is the identity, i.e. u is conjugate to (1, cursor).
inline bool all_pi_trivial(const WreathElement& u) {
    CosetPartition part = coset_partition(u.lamp.support(), u.cursor, u.lamp.base());
    GroupElement e = u.lamp.base().identity();
    for (std::size_t ci = 0; ci < part.cosets.size(); ++ci)
        if (!u.lamp.top().is_identity(pi_product(u.lamp, part, ci, e))) return false;
    return true;
}

struct PiEntry {
    GroupElement rep;
    GroupElement pi_f;
    GroupElement pi_g; // shifted by the certificate's z
};

struct ConjugacyCertificate {
    WreathElement conjugator; // (h, z)
    GroupElement z;
    std::vector<PiEntry> pi_table;
    std::vector<std::pair<GroupElement, GroupElement>> alphas; // (rep, alpha), finite order
    bool verified = false;
};

struct WreathConjugacyResult {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<ConjugacyCertificate> certificate;
    Int n = 0;                // |u| + |v|
    Int searched_radius = -1; // exhausted z-ball radius in the search branch
    std::string note;
};

struct SolvableConjugacyResult {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<GroupElement> conjugator;
    Int n = 0;
    Int length_bound = 0; // cubic ceiling the conjugator must satisfy
    std::string note;
};

WreathConjugacyResult wreath_conjugacy(const WreathElement& u, const WreathElement& v);
SolvableConjugacyResult solvable_conjugacy(const GroupElement& u, const GroupElement& v,
                                           Caps caps = {});

/// Conjugacy in a base group, with a witness of minimal length where the
/// search is exhaustive. Abelian oracles need z = e; Perm3 scans the
/// whole group; solvable towers recurse through their images.
struct BaseConjugacy {
    Verdict verdict = Verdict::No;
    std::optional<GroupElement> z;
};

inline BaseConjugacy base_conjugator(const GroupOracle& B, const GroupElement& b,
                                     const GroupElement& c) {
    switch (B.descriptor().kind) {
    case GroupKind::FreeAbelian:
    case GroupKind::Cyclic:
        if (b == c) return {Verdict::Yes, B.identity()};
        return {Verdict::No, std::nullopt};
    case GroupKind::Perm3: {
        for (const auto& [z, d] : B.ball(3))
            if (B.mul(b, z) == B.mul(z, c)) return {Verdict::Yes, z};
        return {Verdict::No, std::nullopt};
    }
    case GroupKind::FreeSolvable: {
        if (B.descriptor().depth == 1) {
            if (b == c) return {Verdict::Yes, B.identity()};
            return {Verdict::No, std::nullopt};
        }
        SolvableConjugacyResult r = solvable_conjugacy(b, c);
        if (r.verdict == Verdict::Yes) return {Verdict::Yes, r.conjugator};
        return {r.verdict, std::nullopt};
    }
    }
    return {Verdict::No, std::nullopt};
}

/// An explicit alpha with pi_f * alpha = alpha * pi_g, searched over the
/// ball of A (equality for abelian A, the whole group for Perm3).
inline std::optional<GroupElement> find_alpha(const GroupOracle& A, const GroupElement& pf,
                                              const GroupElement& pg, Int radius) {
    switch (A.descriptor().kind) {
    case GroupKind::FreeAbelian:
    case GroupKind::Cyclic:
        if (pf == pg) return A.identity();
        return std::nullopt;
    case GroupKind::FreeSolvable:
        if (A.descriptor().depth == 1) {
            if (pf == pg) return A.identity();
            return std::nullopt;
        }
        break;
    case GroupKind::Perm3:
        radius = 3;
        break;
    }
    int r = static_cast<int>(std::min<Int>(radius, A.radius_cap()));
    for (const auto& [alpha, d] : A.ball(r))
        if (A.mul(pf, alpha) == A.mul(alpha, pg)) return alpha;
    return std::nullopt;
}

/// Complete conjugacy decision in A wr B.
///
/// When every pi-product of f vanishes, u is conjugate to (1, b) and the
/// question reduces to base-group conjugacy of the cursors plus the same
/// vanishing for g; the certificate composes the two trivializing lamps
/// with a base conjugator. Otherwise some pi-product survives, every
/// conjugator's cursor z satisfies |z| <= n, and scanning the B-ball of
/// radius n for a z with b z = z c and matching pi-products decides the
/// question outright; exhausting the ball proves non-conjugacy. Caps make
/// the answer "inconclusive", never a false "no".
namespace detail {
WreathConjugacyResult wreath_conjugacy_impl(const WreathElement& u,
                                            const WreathElement& v);
}

inline WreathConjugacyResult wreath_conjugacy(const WreathElement& u,
                                              const WreathElement& v) {
    // A cap hit anywhere inside the search degrades the verdict to
    // "inconclusive"; it never turns into a false "no".
    try {
        return detail::wreath_conjugacy_impl(u, v);
    } catch (const resource_error& e) {
        WreathConjugacyResult result;
        result.note = std::string("search hit a cap: ") + e.what();
        return result;
    }
}

inline WreathConjugacyResult detail::wreath_conjugacy_impl(const WreathElement& u,
                                                           const WreathElement& v) {
    check_same_wreath(u, v);
    const GroupOracle& B = u.lamp.base();
    const GroupOracle& A = u.lamp.top();
    const GroupElement& b = u.cursor;
    const GroupElement& c = v.cursor;

    WreathConjugacyResult result;
    result.n = wreath_word_length(u) + wreath_word_length(v);

    CosetPartition part_f = coset_partition(u.lamp.support(), b, B);
    GroupElement eB = B.identity();
    bool branch_t = true;
    for (std::size_t ci = 0; ci < part_f.cosets.size() && branch_t; ++ci)
        branch_t = A.is_identity(pi_product(u.lamp, part_f, ci, eB));

    if (branch_t) {
        // u ~ (1, b); v must likewise trivialize and the cursors must be
        // conjugate in B.
        CosetPartition part_g = coset_partition(v.lamp.support(), c, B);
        for (std::size_t ci = 0; ci < part_g.cosets.size(); ++ci)
            if (!A.is_identity(pi_product(v.lamp, part_g, ci, eB))) {
                result.verdict = Verdict::No;
                return result;
            }
        BaseConjugacy bc = base_conjugator(B, b, c);
        if (bc.verdict != Verdict::Yes) {
            result.verdict = bc.verdict;
            if (bc.verdict == Verdict::Inconclusive)
                result.note = "base conjugacy search hit a cap";
            return result;
        }
        auto hf = trivialization_conjugator(u.lamp, b, part_f);
        auto hg = trivialization_conjugator(v.lamp, c, part_g);
        if (!hf || !hg) throw std::logic_error("trivialization lost a vanished pi");
        WreathElement gamma_f{*hf, eB};
        WreathElement gamma_z{FinSuppMap(B, A), *bc.z};
        WreathElement gamma_g{*hg, eB};
        WreathElement gamma = wreath_mul(wreath_mul(gamma_f, gamma_z), wreath_inv(gamma_g));
        if (!verify_conjugator(u, v, gamma))
            throw std::logic_error("composed trivialization certificate failed to verify");
        ConjugacyCertificate cert{gamma, *bc.z, {}, {}, true};
        for (std::size_t ci = 0; ci < part_f.cosets.size(); ++ci)
            cert.pi_table.push_back(
                {part_f.cosets[ci].rep, A.identity(), A.identity()});
        result.verdict = Verdict::Yes;
        result.certificate = std::move(cert);
        return result;
    }

    // Search branch: some pi-product of f is nontrivial. Any conjugator's
    // cursor z satisfies b z = z c, so non-conjugate cursors settle the
    // question before any ball is enumerated.
    if (!(b == c)) {
        BaseConjugacy pre = base_conjugator(B, b, c);
        if (pre.verdict == Verdict::No) {
            result.verdict = Verdict::No;
            return result;
        }
    }
    int radius = static_cast<int>(result.n);
    if (radius > B.radius_cap()) {
        result.note = "z-ball radius " + std::to_string(radius) + " exceeds BFS cap " +
                      std::to_string(B.radius_cap());
        return result;
    }
    std::vector<std::pair<GroupElement, Int>> zball;
    try {
        zball = B.ball(radius);
    } catch (const resource_error& e) {
        result.note = std::string("z-ball enumeration hit a cap: ") + e.what();
        return result;
    }

    std::vector<GroupElement> joint = u.lamp.support();
    for (const auto& [z, zdist] : zball) {
        if (!(B.mul(b, z) == B.mul(z, c))) continue;
        joint.resize(u.lamp.support_size());
        for (const auto& [s, val] : v.lamp.entries()) joint.push_back(B.mul(z, s));
        CosetPartition part = coset_partition(joint, b, B);

        bool match = true;
        std::vector<PiEntry> pi_table;
        std::vector<GroupElement> alphas;
        for (std::size_t ci = 0; ci < part.cosets.size() && match; ++ci) {
            GroupElement pf = pi_product(u.lamp, part, ci, eB);
            GroupElement pg = pi_product(v.lamp, part, ci, z);
            pi_table.push_back({part.cosets[ci].rep, pf, pg});
            if (!part.order) {
                match = pf == pg;
            } else {
                Int alpha_radius = u.lamp.total_weight() + v.lamp.total_weight() +
                                   clf_upper_bound_for(A, result.n);
                auto alpha = find_alpha(A, pf, pg, alpha_radius);
                if (alpha)
                    alphas.push_back(*alpha);
                else
                    match = false;
            }
        }
        if (!match) continue;

        FinSuppMap h = build_conjugator_h(u.lamp, v.lamp, b, z, part,
                                          part.order ? &alphas : nullptr);
        WreathElement gamma{h, z};
        if (!verify_conjugator(u, v, gamma))
            throw std::logic_error("matched pi-products but certificate failed to verify");
        ConjugacyCertificate cert{gamma, z, std::move(pi_table), {}, true};
        if (part.order)
            for (std::size_t ci = 0; ci < part.cosets.size(); ++ci)
                cert.alphas.emplace_back(part.cosets[ci].rep, alphas[ci]);
        result.verdict = Verdict::Yes;
        result.certificate = std::move(cert);
        result.searched_radius = static_cast<int>(zdist);
        return result;
    }

    result.verdict = Verdict::No;
    result.searched_radius = radius;
    return result;
}

/// Conjugacy in S_{r,d}: decide on the images in Z^r wr S_{r,d-1}, then
/// realize a conjugator in the group itself by lifting the certificate's
/// cursor and correcting it with kernel elements found by ball search,
/// each candidate checked by direct multiplication.
inline SolvableConjugacyResult solvable_conjugacy(const GroupElement& u,
                                                  const GroupElement& v, Caps caps) {
    if (u.group().kind != GroupKind::FreeSolvable || !(u.group() == v.group()))
        throw input_error("solvable_conjugacy: expected two elements of one S_{r,d}");
    const int depth = u.group().depth;
    GroupOracle G(u.group(), caps);

    SolvableConjugacyResult result;
    if (depth == 1) {
        result.n = G.word_length(u) + G.word_length(v);
        result.length_bound = 0;
        if (u == v) {
            result.verdict = Verdict::Yes;
            result.conjugator = G.identity();
        } else {
            result.verdict = Verdict::No;
        }
        return result;
    }

    result.n = G.word_length(u) + G.word_length(v);
    const Int n = result.n;
    result.length_bound = (16 * n * n + 8 * n) * (16 * n + 1);

    WreathElement phi_u = magnus_image(u, caps);
    WreathElement phi_v = magnus_image(v, caps);
    WreathConjugacyResult wc = wreath_conjugacy(phi_u, phi_v);
    if (wc.verdict != Verdict::Yes) {
        result.verdict = wc.verdict;
        result.note = wc.note;
        return result;
    }

    // Lift: the certificate fixes the cursor gamma; some preimage of it
    // conjugates u to v, and every preimage is gamma0 * (kernel element).
    GroupElement gamma0 = G.from_word(wc.certificate->z.word());
    if (verify_conjugator(u, v, gamma0)) {
        result.verdict = Verdict::Yes;
        result.conjugator = gamma0;
        return result;
    }
    for (int radius = 1; radius <= G.radius_cap(); ++radius) {
        for (const auto& [y, d] : G.ball(radius)) {
            if (d != radius) continue;
            if (!nf_is_identity(*y.nf().cursor)) continue; // not in the kernel
            GroupElement w = G.mul(gamma0, y);
            if (verify_conjugator(u, v, w)) {
                result.verdict = Verdict::Yes;
                result.conjugator = w;
                return result;
            }
        }
    }
    throw resource_error("solvable_conjugacy: conjugate pair, but the lift search "
                         "exhausted the BFS radius cap " +
                         std::to_string(G.radius_cap()));
}

} // namespace clf
