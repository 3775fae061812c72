#pragma once

#include <clf/errors.hpp>
#include <clf/solvable_nf.hpp>
#include <clf/words.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace clf {

enum class GroupKind { FreeAbelian, Cyclic, Perm3, FreeSolvable };

/// Which concrete group an oracle speaks for. Specs: `Zr:<r>`, `C:<q>`,
/// `P3`, `S:<r>,<d>`; aliases `Z` (= Zr:1), `Z^<r>` (= Zr:<r>) and
/// `Z<q>` (= C:<q>, lamplighter shorthand) are accepted on input.
struct GroupDescriptor {
    GroupKind kind = GroupKind::FreeAbelian;
    int rank = 1;    // FreeAbelian, FreeSolvable
    int modulus = 0; // Cyclic
    int depth = 0;   // FreeSolvable

    static GroupDescriptor free_abelian(int r) {
        if (r < 1) throw input_error("FreeAbelian: rank must be >= 1");
        return {GroupKind::FreeAbelian, r, 0, 0};
    }
    static GroupDescriptor cyclic(int q) {
        if (q < 1) throw input_error("Cyclic: modulus must be >= 1");
        return {GroupKind::Cyclic, 0, q, 0};
    }
    static GroupDescriptor perm3() { return {GroupKind::Perm3, 0, 0, 0}; }
    static GroupDescriptor free_solvable(int r, int d) {
        if (r < 1) throw input_error("FreeSolvable: rank must be >= 1");
        if (d < 1) throw input_error("FreeSolvable: depth must be >= 1");
        return {GroupKind::FreeSolvable, r, 0, d};
    }

    static GroupDescriptor parse(std::string_view spec);
    std::string str() const;

    friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
    friend auto operator<=>(const GroupDescriptor&, const GroupDescriptor&) = default;
};

/// Permutation of {1,2,3}; img[i] is the 0-based image of i.
/// Multiplication is function composition: (a*b)(x) = a(b(x)).
struct Perm3Elt {
    std::array<std::uint8_t, 3> img{0, 1, 2};
    friend bool operator==(const Perm3Elt&, const Perm3Elt&) = default;
    friend auto operator<=>(const Perm3Elt&, const Perm3Elt&) = default;
};

/// Free solvable elements carry a representative word plus the canonical
/// normal form. Equality and ordering look at the normal form only.
struct SolvablePayload {
    ReducedWord word;
    SolvableNF nf;
};
using SolvablePtr = std::shared_ptr<const SolvablePayload>;

class GroupElement {
public:
    GroupElement() = default;
    GroupElement(GroupDescriptor g, std::vector<Int> v) : group_(g), payload_(std::move(v)) {}
    GroupElement(GroupDescriptor g, Int residue) : group_(g), payload_(residue) {}
    GroupElement(GroupDescriptor g, Perm3Elt p) : group_(g), payload_(p) {}
    GroupElement(GroupDescriptor g, SolvablePtr s) : group_(g), payload_(std::move(s)) {}

    const GroupDescriptor& group() const { return group_; }
    const std::vector<Int>& vec() const { return std::get<std::vector<Int>>(payload_); }
    Int residue() const { return std::get<Int>(payload_); }
    const Perm3Elt& perm() const { return std::get<Perm3Elt>(payload_); }
    const SolvablePtr& solv() const { return std::get<SolvablePtr>(payload_); }

    /// Representative word for free solvable elements.
    const ReducedWord& word() const { return solv()->word; }
    const SolvableNF& nf() const { return solv()->nf; }

private:
    GroupDescriptor group_;
    std::variant<std::vector<Int>, Int, Perm3Elt, SolvablePtr> payload_;
};

/// Total order on canonical forms; elements of different groups sort by
/// descriptor. Free solvable payloads compare by normal form, never by
/// the representative word.
inline std::strong_ordering compare_elements(const GroupElement& a, const GroupElement& b) {
    if (auto c = a.group() <=> b.group(); c != 0) return c;
    switch (a.group().kind) {
    case GroupKind::FreeAbelian: {
        const auto& u = a.vec();
        const auto& v = b.vec();
        for (std::size_t i = 0; i < u.size(); ++i)
            if (auto c = u[i] <=> v[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
    case GroupKind::Cyclic:
        return a.residue() <=> b.residue();
    case GroupKind::Perm3:
        return a.perm() <=> b.perm();
    case GroupKind::FreeSolvable:
        return nf_compare(a.nf(), b.nf());
    }
    return std::strong_ordering::equal;
}

inline bool operator==(const GroupElement& a, const GroupElement& b) {
    return compare_elements(a, b) == 0;
}
inline bool operator<(const GroupElement& a, const GroupElement& b) {
    return compare_elements(a, b) < 0;
}

/// Resource limits for the search-backed operations.
struct Caps {
    int bfs_radius = 12;                 // ball radius cap, exponential growth
    int poly_radius = 64;                // ball radius cap, polynomial growth / finite
    std::size_t bfs_nodes = 4'000'000;   // enumerated-vertex cap per ball
    int visiting_points = 12;            // visiting-path support cap
};

namespace detail {

struct BallCache {
    std::mutex m;
    int radius_done = -1;
    bool complete = false; // the whole (finite) group has been enumerated
    std::map<GroupElement, Int> dist;
};

inline std::shared_ptr<BallCache> ball_cache_for(const std::string& key) {
    static std::mutex m;
    static std::map<std::string, std::shared_ptr<BallCache>> registry;
    std::lock_guard<std::mutex> lock(m);
    auto& slot = registry[key];
    if (!slot) slot = std::make_shared<BallCache>();
    return slot;
}

} // namespace detail

/// Uniform interface over the built-in base groups. Operations are total
/// on elements of the oracle's own group; mixing oracles is an input
/// error. Word metrics use closed forms where available and cached BFS
/// otherwise, failing loudly (resource_error) when a cap is hit.
class GroupOracle {
public:
    explicit GroupOracle(GroupDescriptor desc, Caps caps = {})
        : desc_(desc), caps_(caps), ball_(detail::ball_cache_for(desc.str())) {}

    explicit GroupOracle(std::string_view spec, Caps caps = {})
        : GroupOracle(GroupDescriptor::parse(spec), caps) {}

    const GroupDescriptor& descriptor() const { return desc_; }
    const Caps& caps() const { return caps_; }
    GroupOracle with_caps(Caps caps) const { return GroupOracle(desc_, caps); }

    /// The ball radius this oracle may explore: solvable towers of depth
    /// >= 2 grow exponentially and get the tight cap, everything else the
    /// polynomial one.
    int radius_cap() const {
        bool exponential =
            desc_.kind == GroupKind::FreeSolvable && desc_.depth >= 2;
        return exponential ? caps_.bfs_radius : caps_.poly_radius;
    }

    int generator_count() const {
        switch (desc_.kind) {
        case GroupKind::FreeAbelian: return desc_.rank;
        case GroupKind::Cyclic: return 1;
        case GroupKind::Perm3: return 2;
        case GroupKind::FreeSolvable: return desc_.rank;
        }
        return 0;
    }

    GroupElement identity() const {
        switch (desc_.kind) {
        case GroupKind::FreeAbelian: return {desc_, std::vector<Int>(desc_.rank, 0)};
        case GroupKind::Cyclic: return {desc_, Int{0}};
        case GroupKind::Perm3: return {desc_, Perm3Elt{}};
        case GroupKind::FreeSolvable:
            return from_word(ReducedWord(desc_.rank));
        }
        throw std::logic_error("bad kind");
    }

    /// i in 1..generator_count(); sign -1 gives the inverse generator.
    GroupElement generator(int i, int sign = +1) const {
        if (i < 1 || i > generator_count())
            throw input_error("generator index out of range");
        switch (desc_.kind) {
        case GroupKind::FreeAbelian: {
            std::vector<Int> v(desc_.rank, 0);
            v[i - 1] = sign >= 0 ? 1 : -1;
            return {desc_, std::move(v)};
        }
        case GroupKind::Cyclic: {
            Int q = desc_.modulus;
            return {desc_, sign >= 0 ? (q == 1 ? 0 : 1) : (q == 1 ? 0 : q - 1)};
        }
        case GroupKind::Perm3: {
            // s1 = (1 2), s2 = (2 3); both involutions.
            Perm3Elt p;
            p.img = i == 1 ? std::array<std::uint8_t, 3>{1, 0, 2}
                           : std::array<std::uint8_t, 3>{0, 2, 1};
            return {desc_, p};
        }
        case GroupKind::FreeSolvable:
            return from_word(ReducedWord::generator(desc_.rank, i, sign));
        }
        throw std::logic_error("bad kind");
    }

    /// Generators and their inverses, deduplicated, in a fixed order.
    std::vector<GroupElement> generating_set() const {
        std::vector<GroupElement> out;
        for (int i = 1; i <= generator_count(); ++i) {
            GroupElement g = generator(i);
            GroupElement gi = generator(i, -1);
            out.push_back(g);
            if (!(g == gi)) out.push_back(gi);
        }
        return out;
    }

    GroupElement mul(const GroupElement& a, const GroupElement& b) const {
        check_member(a);
        check_member(b);
        switch (desc_.kind) {
        case GroupKind::FreeAbelian: {
            std::vector<Int> v = a.vec();
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.vec()[i];
            return {desc_, std::move(v)};
        }
        case GroupKind::Cyclic:
            return {desc_, (a.residue() + b.residue()) % desc_.modulus};
        case GroupKind::Perm3: {
            Perm3Elt p;
            for (int i = 0; i < 3; ++i) p.img[i] = a.perm().img[b.perm().img[i]];
            return {desc_, p};
        }
        case GroupKind::FreeSolvable: {
            auto payload = std::make_shared<SolvablePayload>();
            payload->word = a.word().concat(b.word());
            payload->nf = *detail::nf_mul(a.nf(), b.nf());
            return {desc_, SolvablePtr(std::move(payload))};
        }
        }
        throw std::logic_error("bad kind");
    }

    GroupElement inv(const GroupElement& a) const {
        check_member(a);
        switch (desc_.kind) {
        case GroupKind::FreeAbelian: {
            std::vector<Int> v = a.vec();
            for (auto& x : v) x = -x;
            return {desc_, std::move(v)};
        }
        case GroupKind::Cyclic:
            return {desc_, (desc_.modulus - a.residue()) % desc_.modulus};
        case GroupKind::Perm3: {
            Perm3Elt p;
            for (int i = 0; i < 3; ++i) p.img[a.perm().img[i]] = static_cast<std::uint8_t>(i);
            return {desc_, p};
        }
        case GroupKind::FreeSolvable: {
            auto payload = std::make_shared<SolvablePayload>();
            payload->word = a.word().inverse();
            payload->nf = *detail::nf_inv(a.nf());
            return {desc_, SolvablePtr(std::move(payload))};
        }
        }
        throw std::logic_error("bad kind");
    }

    GroupElement power(const GroupElement& a, Int k) const {
        if (desc_.kind == GroupKind::FreeAbelian) {
            std::vector<Int> v = a.vec();
            for (auto& x : v) x *= k;
            return {desc_, std::move(v)};
        }
        if (desc_.kind == GroupKind::Cyclic) {
            Int q = desc_.modulus;
            Int r = (a.residue() % q) * (k % q) % q;
            return {desc_, ((r % q) + q) % q};
        }
        GroupElement base = k >= 0 ? a : inv(a);
        Int reps = k >= 0 ? k : -k;
        GroupElement acc = identity();
        for (Int i = 0; i < reps; ++i) acc = mul(acc, base);
        return acc;
    }

    bool is_identity(const GroupElement& a) const { return a == identity(); }
    bool equal(const GroupElement& a, const GroupElement& b) const { return a == b; }

    /// Evaluate a word in the oracle's generators. The word rank must
    /// equal generator_count().
    GroupElement from_word(const ReducedWord& w) const {
        if (w.rank() != generator_count())
            throw input_error("from_word: word rank " + std::to_string(w.rank()) +
                              " does not match generator count " +
                              std::to_string(generator_count()));
        if (desc_.kind == GroupKind::FreeSolvable) {
            auto payload = std::make_shared<SolvablePayload>();
            payload->word = w;
            payload->nf = *detail::nf_of_word(desc_.rank, desc_.depth, w);
            return {desc_, SolvablePtr(std::move(payload))};
        }
        GroupElement acc = identity();
        for (int letter : w.letters())
            acc = mul(acc, generator(letter > 0 ? letter : -letter, letter > 0 ? +1 : -1));
        return acc;
    }

    bool finite_group() const {
        return desc_.kind == GroupKind::Cyclic || desc_.kind == GroupKind::Perm3;
    }

    /// Order of an element; nullopt means infinite order.
    std::optional<Int> element_order(const GroupElement& a) const {
        check_member(a);
        if (is_identity(a)) return Int{1};
        switch (desc_.kind) {
        case GroupKind::FreeAbelian:
        case GroupKind::FreeSolvable:
            return std::nullopt; // torsion-free
        case GroupKind::Cyclic: {
            Int q = desc_.modulus;
            return q / std::gcd(a.residue(), q);
        }
        case GroupKind::Perm3: {
            GroupElement p = a;
            for (Int n = 1; n <= 3; ++n) {
                if (is_identity(p)) return n;
                p = mul(p, a);
            }
            return Int{3};
        }
        }
        return std::nullopt;
    }

    /// Exact distance from the identity in the word metric.
    Int word_length(const GroupElement& a) const {
        check_member(a);
        switch (desc_.kind) {
        case GroupKind::FreeAbelian: {
            Int s = 0;
            for (Int v : a.vec()) s += v >= 0 ? v : -v;
            return s;
        }
        case GroupKind::Cyclic: {
            Int q = desc_.modulus;
            Int r = a.residue();
            return std::min(r, q - r);
        }
        case GroupKind::Perm3:
        case GroupKind::FreeSolvable: {
            if (desc_.kind == GroupKind::FreeSolvable && desc_.depth == 1) {
                Int s = 0;
                for (Int v : a.nf().abelian) s += v >= 0 ? v : -v;
                return s;
            }
            // Cache warmth must not change observable behavior: answers
            // beyond this oracle's radius cap stay resource errors.
            for (;;) {
                {
                    std::lock_guard<std::mutex> lock(ball_->m);
                    auto it = ball_->dist.find(a);
                    if (it != ball_->dist.end()) {
                        if (it->second > radius_cap())
                            throw resource_error("word_length: distance " +
                                                 std::to_string(it->second) +
                                                 " exceeds the BFS radius cap " +
                                                 std::to_string(radius_cap()) +
                                                 " for " + desc_.str());
                        return it->second;
                    }
                    if (ball_->complete)
                        throw std::logic_error("element missing from complete ball");
                    if (ball_->radius_done >= radius_cap())
                        throw resource_error("word_length: BFS radius cap " +
                                             std::to_string(radius_cap()) +
                                             " exceeded for " + desc_.str());
                }
                expand_ball(shown_radius() + 1);
            }
        }
        }
        throw std::logic_error("bad kind");
    }

    /// All elements within the given radius, with exact distances,
    /// sorted by (distance, canonical form).
    std::vector<std::pair<GroupElement, Int>> ball(int radius) const {
        if (radius < 0) throw input_error("ball: negative radius");
        if (radius > radius_cap())
            throw resource_error("ball: radius " + std::to_string(radius) +
                                 " exceeds BFS radius cap " +
                                 std::to_string(radius_cap()));
        expand_ball(radius);
        std::vector<std::pair<GroupElement, Int>> out;
        {
            std::lock_guard<std::mutex> lock(ball_->m);
            for (const auto& [g, d] : ball_->dist)
                if (d <= radius) out.emplace_back(g, d);
        }
        std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
            if (x.second != y.second) return x.second < y.second;
            return x.first < y.first;
        });
        return out;
    }

    /// Solve b^k = x for integer k with |k| <= search_bound; the minimal
    /// |k| wins (ties go to the nonnegative one). For Cyclic and Perm3
    /// the search wraps at the order of b, so the answer is exact; for
    /// FreeAbelian and abelianized solvable groups it is closed-form.
    std::optional<Int> cyclic_power_solve(const GroupElement& b, const GroupElement& x,
                                          Int search_bound) const {
        check_member(b);
        check_member(x);
        if (is_identity(b)) return is_identity(x) ? std::optional<Int>(0) : std::nullopt;
        switch (desc_.kind) {
        case GroupKind::FreeAbelian:
            return solve_abelian(b.vec(), x.vec(), search_bound);
        case GroupKind::Cyclic:
        case GroupKind::Perm3: {
            Int order = *element_order(b);
            GroupElement p = identity();
            for (Int k = 0; k < order; ++k) {
                if (p == x) {
                    Int alt = k - order;
                    Int best = (k <= -alt) ? k : alt;
                    if (std::abs(best) <= search_bound) return best;
                    return std::nullopt;
                }
                p = mul(p, b);
            }
            return std::nullopt;
        }
        case GroupKind::FreeSolvable: {
            if (desc_.depth == 1) return solve_abelian(b.nf().abelian, x.nf().abelian, search_bound);
            GroupElement pos = identity(), neg = identity();
            GroupElement binv = inv(b);
            if (pos == x) return Int{0};
            for (Int k = 1; k <= search_bound; ++k) {
                pos = mul(pos, b);
                if (pos == x) return k;
                neg = mul(neg, binv);
                if (neg == x) return -k;
            }
            return std::nullopt;
        }
        }
        return std::nullopt;
    }

    std::string print(const GroupElement& a) const;
    GroupElement parse(std::string_view literal) const;

private:
    static std::optional<Int> solve_abelian(const std::vector<Int>& b, const std::vector<Int>& x,
                                            Int search_bound) {
        std::size_t pivot = b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b[i] != 0) { pivot = i; break; }
        if (pivot == b.size()) return std::nullopt; // b is the identity; handled by caller
        if (x[pivot] % b[pivot] != 0) return std::nullopt;
        Int k = x[pivot] / b[pivot];
        for (std::size_t i = 0; i < b.size(); ++i)
            if (x[i] != k * b[i]) return std::nullopt;
        if (std::abs(k) > search_bound) return std::nullopt;
        return k;
    }

    int shown_radius() const {
        std::lock_guard<std::mutex> lock(ball_->m);
        return ball_->radius_done;
    }

    // The frontier is recomputed from the distance map each layer, so a
    // cap-triggered throw mid-layer leaves the cache resumable.
    void expand_ball(int radius) const {
        std::lock_guard<std::mutex> lock(ball_->m);
        if (ball_->radius_done < 0) {
            ball_->dist.emplace(identity(), 0);
            ball_->radius_done = 0;
        }
        auto gens = generating_set();
        while (!ball_->complete && ball_->radius_done < radius) {
            std::vector<const GroupElement*> frontier;
            for (const auto& [g, d] : ball_->dist)
                if (d == ball_->radius_done) frontier.push_back(&g);
            for (const GroupElement* g : frontier) {
                for (const auto& s : gens) {
                    GroupElement h = mul(*g, s);
                    if (ball_->dist.emplace(std::move(h), ball_->radius_done + 1).second &&
                        ball_->dist.size() > caps_.bfs_nodes)
                        throw resource_error("ball: node cap " +
                                             std::to_string(caps_.bfs_nodes) +
                                             " exceeded for " + desc_.str());
                }
            }
            ++ball_->radius_done;
            bool layer_nonempty = false;
            for (const auto& [g, d] : ball_->dist)
                if (d == ball_->radius_done) { layer_nonempty = true; break; }
            if (!layer_nonempty) ball_->complete = true;
        }
    }

    void check_member(const GroupElement& a) const {
        if (!(a.group() == desc_))
            throw input_error("element of " + a.group().str() +
                              " used with oracle for " + desc_.str());
    }

    GroupDescriptor desc_;
    Caps caps_;
    std::shared_ptr<detail::BallCache> ball_;
};

// ---------------------------------------------------------------------------
// descriptor & literal parsing

inline GroupDescriptor GroupDescriptor::parse(std::string_view spec) {
    auto starts_with = [&](std::string_view p) { return spec.substr(0, p.size()) == p; };
    auto int_after = [&](std::size_t pos) {
        int v = 0;
        bool any = false;
        for (std::size_t i = pos; i < spec.size(); ++i) {
            if (spec[i] < '0' || spec[i] > '9')
                throw input_error("group spec: bad number in '" + std::string(spec) + "'");
            v = v * 10 + (spec[i] - '0');
            any = true;
        }
        if (!any) throw input_error("group spec: missing number in '" + std::string(spec) + "'");
        return v;
    };
    if (spec == "P3") return perm3();
    if (spec == "Z") return free_abelian(1);
    if (starts_with("Zr:")) return free_abelian(int_after(3));
    if (starts_with("C:")) return cyclic(int_after(2));
    if (starts_with("Z^")) return free_abelian(int_after(2));
    if (starts_with("S:")) {
        auto rest = spec.substr(2);
        auto comma = rest.find(',');
        if (comma == std::string_view::npos)
            throw input_error("group spec: expected S:<rank>,<depth>");
        int r = 0, d = 0;
        for (char ch : rest.substr(0, comma)) {
            if (ch < '0' || ch > '9') throw input_error("group spec: bad rank");
            r = r * 10 + (ch - '0');
        }
        for (char ch : rest.substr(comma + 1)) {
            if (ch < '0' || ch > '9') throw input_error("group spec: bad depth");
            d = d * 10 + (ch - '0');
        }
        return free_solvable(r, d);
    }
    if (spec.size() >= 2 && spec[0] == 'Z' && spec[1] >= '0' && spec[1] <= '9')
        return cyclic(int_after(1));
    throw input_error("unknown group spec '" + std::string(spec) + "'");
}

inline std::string GroupDescriptor::str() const {
    switch (kind) {
    case GroupKind::FreeAbelian: return "Zr:" + std::to_string(rank);
    case GroupKind::Cyclic: return "C:" + std::to_string(modulus);
    case GroupKind::Perm3: return "P3";
    case GroupKind::FreeSolvable:
        return "S:" + std::to_string(rank) + "," + std::to_string(depth);
    }
    return "?";
}

namespace detail {

inline std::vector<Int> parse_int_tuple(std::string_view text, std::size_t expect) {
    auto bad = [&]() {
        return input_error("tuple literal '" + std::string(text) + "': expected " +
                           std::to_string(expect) + " comma-separated integers");
    };
    auto to_int = [&](const std::string& buf) {
        if (buf.empty() || (buf.size() == 1 && (buf[0] == '-' || buf[0] == '+')))
            throw bad();
        for (std::size_t i = (buf[0] == '-' || buf[0] == '+') ? 1 : 0; i < buf.size(); ++i)
            if (buf[i] < '0' || buf[i] > '9') throw bad();
        try {
            return static_cast<Int>(std::stoll(buf));
        } catch (const std::exception&) {
            throw bad();
        }
    };
    std::vector<Int> out;
    std::string buf;
    for (char c : text) {
        if (c == '(' || c == ')' || c == ' ') continue;
        if (c == ',') {
            out.push_back(to_int(buf));
            buf.clear();
        } else {
            buf += c;
        }
    }
    if (!buf.empty()) out.push_back(to_int(buf));
    if (out.size() != expect) throw bad();
    return out;
}

inline std::string perm3_cycles(const Perm3Elt& p) {
    if (p == Perm3Elt{}) return "e";
    std::array<bool, 3> seen{false, false, false};
    std::string out;
    for (int start = 0; start < 3; ++start) {
        if (seen[start] || p.img[start] == start) continue;
        out += '(';
        int cur = start;
        bool first = true;
        do {
            if (!first) out += ' ';
            out += std::to_string(cur + 1);
            seen[cur] = true;
            cur = p.img[cur];
            first = false;
        } while (cur != start);
        out += ')';
    }
    return out;
}

inline Perm3Elt perm3_from_cycles(std::string_view text) {
    Perm3Elt p;
    std::string cleaned(text);
    if (cleaned == "e" || cleaned == "()" || cleaned.empty()) return p;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && cleaned[i] == ' ') ++i;
        if (i >= cleaned.size()) break;
        if (cleaned[i] != '(')
            throw input_error("permutation literal '" + cleaned + "': expected '('");
        ++i;
        std::vector<int> cycle;
        while (i < cleaned.size() && cleaned[i] != ')') {
            if (cleaned[i] == ' ' || cleaned[i] == ',') { ++i; continue; }
            if (cleaned[i] < '1' || cleaned[i] > '3')
                throw input_error("permutation literal: points must be 1..3");
            cycle.push_back(cleaned[i] - '1');
            ++i;
        }
        if (i >= cleaned.size())
            throw input_error("permutation literal '" + cleaned + "': missing ')'");
        ++i;
        if (cycle.size() < 2) throw input_error("permutation literal: cycle too short");
        Perm3Elt c;
        for (std::size_t k = 0; k < cycle.size(); ++k)
            c.img[cycle[k]] = static_cast<std::uint8_t>(cycle[(k + 1) % cycle.size()]);
        // juxtaposed cycles compose right-to-left, like the group law
        Perm3Elt composed;
        for (int j = 0; j < 3; ++j) composed.img[j] = p.img[c.img[j]];
        p = composed;
    }
    return p;
}

} // namespace detail

inline std::string GroupOracle::print(const GroupElement& a) const {
    check_member(a);
    switch (desc_.kind) {
    case GroupKind::FreeAbelian: {
        if (desc_.rank == 1) return std::to_string(a.vec()[0]);
        std::string out = "(";
        for (int i = 0; i < desc_.rank; ++i) {
            if (i) out += ',';
            out += std::to_string(a.vec()[i]);
        }
        return out + ")";
    }
    case GroupKind::Cyclic:
        return std::to_string(a.residue());
    case GroupKind::Perm3:
        return detail::perm3_cycles(a.perm());
    case GroupKind::FreeSolvable:
        return a.word().str();
    }
    return "?";
}

inline GroupElement GroupOracle::parse(std::string_view literal) const {
    switch (desc_.kind) {
    case GroupKind::FreeAbelian:
        return {desc_, detail::parse_int_tuple(literal, static_cast<std::size_t>(desc_.rank))};
    case GroupKind::Cyclic: {
        Int q = desc_.modulus;
        Int v = 0;
        try {
            v = std::stoll(std::string(literal));
        } catch (const std::exception&) {
            throw input_error("cyclic literal '" + std::string(literal) + "'");
        }
        return {desc_, ((v % q) + q) % q};
    }
    case GroupKind::Perm3:
        return {desc_, detail::perm3_from_cycles(literal)};
    case GroupKind::FreeSolvable:
        return from_word(ReducedWord::parse(desc_.rank, literal));
    }
    throw std::logic_error("bad kind");
}

} // namespace clf
