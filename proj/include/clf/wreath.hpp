#pragma once

#include <clf/groups.hpp>
#include <clf/json_io.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace clf {

/// Finitely supported map from a base group B to a top group A, the lamp
/// configuration of a wreath-product element. Entries are sorted by the
/// canonical form of their key and never map to the identity of A.
class FinSuppMap {
public:
    FinSuppMap(GroupOracle base, GroupOracle top)
        : base_(std::move(base)), top_(std::move(top)) {}

    static FinSuppMap from_entries(GroupOracle base, GroupOracle top,
                                   std::vector<std::pair<GroupElement, GroupElement>> raw) {
        FinSuppMap f(std::move(base), std::move(top));
        std::sort(raw.begin(), raw.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [key, val] : raw) {
            if (!f.entries_.empty() && f.entries_.back().first == key)
                f.entries_.back().second = f.top_.mul(f.entries_.back().second, val);
            else
                f.entries_.emplace_back(std::move(key), std::move(val));
        }
        std::erase_if(f.entries_,
                      [&](const auto& e) { return f.top_.is_identity(e.second); });
        return f;
    }

    const GroupOracle& base() const { return base_; }
    const GroupOracle& top() const { return top_; }
    const std::vector<std::pair<GroupElement, GroupElement>>& entries() const {
        return entries_;
    }

    bool trivial() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    std::vector<GroupElement> support() const {
        std::vector<GroupElement> out;
        out.reserve(entries_.size());
        for (const auto& [key, val] : entries_) out.push_back(key);
        return out;
    }

    /// Value at x, or the identity of A off the support.
    GroupElement at(const GroupElement& x) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                                   [](const auto& e, const GroupElement& k) {
                                       return e.first < k;
                                   });
        if (it != entries_.end() && it->first == x) return it->second;
        return top_.identity();
    }

    /// Copy with the value at `key` replaced (erased when the identity).
    FinSuppMap with_value(const GroupElement& key, const GroupElement& val) const {
        FinSuppMap f = *this;
        auto it = std::lower_bound(f.entries_.begin(), f.entries_.end(), key,
                                   [](const auto& e, const GroupElement& k) {
                                       return e.first < k;
                                   });
        bool found = it != f.entries_.end() && it->first == key;
        if (top_.is_identity(val)) {
            if (found) f.entries_.erase(it);
        } else if (found) {
            it->second = val;
        } else {
            f.entries_.insert(it, {key, val});
        }
        return f;
    }

    FinSuppMap pointwise_mul(const FinSuppMap& g) const {
        std::vector<std::pair<GroupElement, GroupElement>> merged;
        merged.reserve(entries_.size() + g.entries_.size());
        auto a = entries_.begin();
        auto b = g.entries_.begin();
        while (a != entries_.end() || b != g.entries_.end()) {
            if (b == g.entries_.end() || (a != entries_.end() && a->first < b->first)) {
                merged.push_back(*a++);
            } else if (a == entries_.end() || b->first < a->first) {
                merged.push_back(*b++);
            } else {
                GroupElement v = top_.mul(a->second, b->second);
                if (!top_.is_identity(v)) merged.emplace_back(a->first, std::move(v));
                ++a;
                ++b;
            }
        }
        FinSuppMap f(base_, top_);
        f.entries_ = std::move(merged);
        return f;
    }

    /// The shift action: (f^b)(x) = f(b^-1 x), i.e. every key k moves to b*k.
    FinSuppMap shifted(const GroupElement& b) const {
        std::vector<std::pair<GroupElement, GroupElement>> moved;
        moved.reserve(entries_.size());
        for (const auto& [key, val] : entries_)
            moved.emplace_back(base_.mul(b, key), val);
        return from_entries(base_, top_, std::move(moved));
    }

    FinSuppMap pointwise_inv() const {
        FinSuppMap f = *this;
        for (auto& [key, val] : f.entries_) val = top_.inv(val);
        return f;
    }

    /// |f| = sum of A-word-lengths over the support.
    Int total_weight() const {
        Int s = 0;
        for (const auto& [key, val] : entries_) s += top_.word_length(val);
        return s;
    }

    friend std::strong_ordering compare_maps(const FinSuppMap& a, const FinSuppMap& b) {
        if (auto c = a.entries_.size() <=> b.entries_.size(); c != 0) return c;
        for (std::size_t i = 0; i < a.entries_.size(); ++i) {
            if (auto c = compare_elements(a.entries_[i].first, b.entries_[i].first); c != 0)
                return c;
            if (auto c = compare_elements(a.entries_[i].second, b.entries_[i].second); c != 0)
                return c;
        }
        return std::strong_ordering::equal;
    }

private:
    GroupOracle base_;
    GroupOracle top_;
    std::vector<std::pair<GroupElement, GroupElement>> entries_;
};

/// A wreath-product element (lamp configuration, cursor).
struct WreathElement {
    FinSuppMap lamp;
    GroupElement cursor;
};

inline std::strong_ordering compare_wreath(const WreathElement& a, const WreathElement& b) {
    if (auto c = compare_elements(a.cursor, b.cursor); c != 0) return c;
    return compare_maps(a.lamp, b.lamp);
}
inline bool operator==(const WreathElement& a, const WreathElement& b) {
    return compare_wreath(a, b) == 0;
}
inline bool operator<(const WreathElement& a, const WreathElement& b) {
    return compare_wreath(a, b) < 0;
}

inline WreathElement wreath_identity(const GroupOracle& base, const GroupOracle& top) {
    return {FinSuppMap(base, top), base.identity()};
}

inline void check_same_wreath(const WreathElement& u, const WreathElement& v) {
    if (!(u.lamp.base().descriptor() == v.lamp.base().descriptor()) ||
        !(u.lamp.top().descriptor() == v.lamp.top().descriptor()))
        throw input_error("wreath elements from different wreath products");
}

/// (f, b)(g, c) = (f * g^b, b c)
inline WreathElement wreath_mul(const WreathElement& u, const WreathElement& v) {
    check_same_wreath(u, v);
    return {u.lamp.pointwise_mul(v.lamp.shifted(u.cursor)),
            u.lamp.base().mul(u.cursor, v.cursor)};
}

inline WreathElement wreath_inv(const WreathElement& u) {
    GroupElement binv = u.lamp.base().inv(u.cursor);
    return {u.lamp.shifted(binv).pointwise_inv(), binv};
}

inline WreathElement wreath_conjugate(const WreathElement& u, const WreathElement& g) {
    return wreath_mul(wreath_mul(wreath_inv(g), u), g);
}

/// Exact length of the shortest Cayley-graph walk that starts at the
/// identity, passes through every given point, and ends at `endpoint`.
/// Fixed-endpoint subset dynamic programming; exponential in the number
/// of points, exact, capped.
inline Int visiting_path_length(const std::vector<GroupElement>& points,
                                const GroupElement& endpoint, const GroupOracle& G,
                                int point_cap) {
    std::set<GroupElement> dedup(points.begin(), points.end());
    std::vector<GroupElement> pts(dedup.begin(), dedup.end());
    const int m = static_cast<int>(pts.size());
    if (m > point_cap)
        throw resource_error("visiting_path_length: support size " + std::to_string(m) +
                             " exceeds point cap " + std::to_string(point_cap));
    if (m == 0) return G.word_length(endpoint);

    std::vector<Int> from_origin(m), to_end(m);
    std::vector<std::vector<Int>> pair_dist(m, std::vector<Int>(m, 0));
    std::vector<GroupElement> inv_pts;
    inv_pts.reserve(m);
    for (const auto& p : pts) inv_pts.push_back(G.inv(p));
    for (int i = 0; i < m; ++i) {
        from_origin[i] = G.word_length(pts[i]);
        to_end[i] = G.word_length(G.mul(inv_pts[i], endpoint));
        for (int j = i + 1; j < m; ++j) {
            Int d = G.word_length(G.mul(inv_pts[i], pts[j]));
            pair_dist[i][j] = pair_dist[j][i] = d;
        }
    }

    constexpr Int kInf = std::numeric_limits<Int>::max() / 4;
    const std::size_t full = std::size_t{1} << m;
    std::vector<std::vector<Int>> dp(full, std::vector<Int>(m, kInf));
    for (int i = 0; i < m; ++i) dp[std::size_t{1} << i][i] = from_origin[i];
    for (std::size_t mask = 1; mask < full; ++mask) {
        for (int i = 0; i < m; ++i) {
            if (!(mask & (std::size_t{1} << i)) || dp[mask][i] >= kInf) continue;
            for (int j = 0; j < m; ++j) {
                if (mask & (std::size_t{1} << j)) continue;
                std::size_t nxt = mask | (std::size_t{1} << j);
                dp[nxt][j] = std::min(dp[nxt][j], dp[mask][i] + pair_dist[i][j]);
            }
        }
    }
    Int best = kInf;
    for (int i = 0; i < m; ++i) best = std::min(best, dp[full - 1][i] + to_end[i]);
    return best;
}

/// |(f, b)| = K(Supp(f), b) + |f| in the standard wreath generating set
/// (base moves plus lamp increments at the cursor).
inline Int wreath_word_length(const WreathElement& u) {
    Int walk = visiting_path_length(u.lamp.support(), u.cursor, u.lamp.base(),
                                    u.lamp.base().caps().visiting_points);
    return walk + u.lamp.total_weight();
}

/// Layered BFS over the wreath Cayley graph. The visitor sees each
/// element once, in (distance, canonical) order; returning true stops
/// the walk early.
inline void wreath_bfs(const GroupOracle& base, const GroupOracle& top, int max_radius,
                       std::size_t node_cap,
                       const std::function<bool(const WreathElement&, Int)>& visit) {
    std::map<WreathElement, Int> dist;
    WreathElement id = wreath_identity(base, top);
    dist.emplace(id, 0);
    if (visit(id, 0)) return;
    auto base_gens = base.generating_set();
    auto top_gens = top.generating_set();
    for (int r = 0; r < max_radius; ++r) {
        std::vector<const WreathElement*> frontier;
        for (const auto& [g, d] : dist)
            if (d == r) frontier.push_back(&g);
        if (frontier.empty()) return;
        std::vector<WreathElement> layer;
        for (const WreathElement* g : frontier) {
            for (const auto& s : base_gens)
                layer.push_back({g->lamp, base.mul(g->cursor, s)});
            for (const auto& t : top_gens)
                layer.push_back({g->lamp.with_value(
                                     g->cursor, top.mul(g->lamp.at(g->cursor), t)),
                                 g->cursor});
        }
        std::sort(layer.begin(), layer.end());
        for (auto& h : layer) {
            if (!dist.emplace(h, r + 1).second) continue;
            if (dist.size() > node_cap)
                throw resource_error("wreath_bfs: node cap " + std::to_string(node_cap) +
                                     " exceeded");
            if (visit(dist.find(h)->first, r + 1)) return;
        }
    }
}

/// The ball of the wreath group, with exact distances.
inline std::vector<std::pair<WreathElement, Int>> wreath_ball(const GroupOracle& base,
                                                              const GroupOracle& top,
                                                              int radius,
                                                              std::size_t node_cap) {
    std::vector<std::pair<WreathElement, Int>> out;
    wreath_bfs(base, top, radius, node_cap, [&](const WreathElement& g, Int d) {
        out.emplace_back(g, d);
        return false;
    });
    return out;
}

// ---------------------------------------------------------------------------
// JSON form: {"base": <B literal>, "lamps": [{"at": <B literal>, "val": <A literal>}]}
// with lamps sorted by canonical key.

inline Json wreath_to_json(const WreathElement& u) {
    Json lamps = Json::array();
    for (const auto& [key, val] : u.lamp.entries()) {
        Json entry;
        entry["at"] = element_to_json(u.lamp.base(), key);
        entry["val"] = element_to_json(u.lamp.top(), val);
        lamps.push_back(std::move(entry));
    }
    Json out;
    out["base"] = element_to_json(u.lamp.base(), u.cursor);
    out["lamps"] = std::move(lamps);
    return out;
}

inline WreathElement wreath_from_json(const GroupOracle& base, const GroupOracle& top,
                                      const Json& j) {
    if (!j.is_object() || !j.contains("base"))
        throw input_error("wreath JSON: expected {\"base\":..., \"lamps\":[...]}");
    GroupElement cursor = element_from_json(base, j.at("base"));
    std::vector<std::pair<GroupElement, GroupElement>> entries;
    if (j.contains("lamps")) {
        if (!j.at("lamps").is_array()) throw input_error("wreath JSON: lamps must be an array");
        for (const auto& e : j.at("lamps")) {
            if (!e.is_object() || !e.contains("at") || !e.contains("val"))
                throw input_error("wreath JSON: lamp entries need \"at\" and \"val\"");
            entries.emplace_back(element_from_json(base, e.at("at")),
                                 element_from_json(top, e.at("val")));
        }
    }
    std::set<GroupElement> keys;
    for (const auto& [key, val] : entries)
        if (!keys.insert(key).second)
            throw input_error("wreath JSON: duplicate lamp key");
    return {FinSuppMap::from_entries(base, top, std::move(entries)), std::move(cursor)};
}

} // namespace clf
