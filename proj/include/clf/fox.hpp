#pragma once

#include <clf/groups.hpp>
#include <clf/words.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace clf {

/// Group law handle for the free group itself, so Z(F) and Z(F/N) share
/// one ring implementation. Keys of Z(F) are reduced words.
struct FreeGroupLaw {
    int rank = 1;
    using Elt = ReducedWord;
    Elt identity() const { return ReducedWord(rank); }
    Elt mul(const Elt& a, const Elt& b) const { return a.concat(b); }
    Elt inv(const Elt& a) const { return a.inverse(); }
    std::strong_ordering cmp(const Elt& a, const Elt& b) const { return a.compare(b); }
    std::string print(const Elt& a) const { return a.str(); }
};

/// Adapter putting a GroupOracle behind the same interface; keys are
/// canonical group elements.
struct OracleLaw {
    GroupOracle oracle;
    using Elt = GroupElement;
    Elt identity() const { return oracle.identity(); }
    Elt mul(const Elt& a, const Elt& b) const { return oracle.mul(a, b); }
    Elt inv(const Elt& a) const { return oracle.inv(a); }
    std::strong_ordering cmp(const Elt& a, const Elt& b) const {
        return compare_elements(a, b);
    }
    std::string print(const Elt& a) const { return oracle.print(a); }
};

/// Exact integer group-ring element: a finite Z-combination of group
/// elements, stored as (canonical key, nonzero coefficient) pairs in
/// canonical key order.
template <class Law>
class RingElement {
public:
    using Elt = typename Law::Elt;
    using Term = std::pair<Elt, Int>;

    explicit RingElement(Law law) : law_(std::move(law)) {}

    static RingElement zero(Law law) { return RingElement(std::move(law)); }

    static RingElement of(Law law, const Elt& g, Int coeff = 1) {
        RingElement r(std::move(law));
        if (coeff != 0) r.terms_.emplace_back(g, coeff);
        return r;
    }

    static RingElement unit(Law law) {
        Elt id = law.identity();
        return of(std::move(law), id);
    }

    const Law& law() const { return law_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Int coeff(const Elt& g) const {
        for (const auto& [key, c] : terms_)
            if (law_.cmp(key, g) == 0) return c;
        return 0;
    }

    /// Sum of coefficients (the augmentation homomorphism).
    Int augmentation() const {
        Int s = 0;
        for (const auto& [key, c] : terms_) s += c;
        return s;
    }

    RingElement add(const RingElement& other) const {
        RingElement out(law_);
        auto a = terms_.begin();
        auto b = other.terms_.begin();
        while (a != terms_.end() || b != other.terms_.end()) {
            if (b == other.terms_.end() ||
                (a != terms_.end() && law_.cmp(a->first, b->first) < 0)) {
                out.terms_.push_back(*a++);
            } else if (a == terms_.end() || law_.cmp(b->first, a->first) < 0) {
                out.terms_.push_back(*b++);
            } else {
                Int c = a->second + b->second;
                if (c != 0) out.terms_.emplace_back(a->first, c);
                ++a;
                ++b;
            }
        }
        return out;
    }

    RingElement negated() const {
        RingElement out = *this;
        for (auto& [key, c] : out.terms_) c = -c;
        return out;
    }

    RingElement sub(const RingElement& other) const { return add(other.negated()); }

    RingElement scaled(Int k) const {
        if (k == 0) return zero(law_);
        RingElement out = *this;
        for (auto& [key, c] : out.terms_) c *= k;
        return out;
    }

    RingElement mul(const RingElement& other) const {
        std::vector<Term> prods;
        prods.reserve(terms_.size() * other.terms_.size());
        for (const auto& [g, cg] : terms_)
            for (const auto& [h, ch] : other.terms_)
                prods.emplace_back(law_.mul(g, h), cg * ch);
        return collect(law_, std::move(prods));
    }

    /// Left translate by a group element: g * this.
    RingElement translated(const Elt& g) const {
        std::vector<Term> prods;
        prods.reserve(terms_.size());
        for (const auto& [h, c] : terms_) prods.emplace_back(law_.mul(g, h), c);
        return collect(law_, std::move(prods));
    }

    static RingElement collect(Law law, std::vector<Term> raw) {
        std::sort(raw.begin(), raw.end(), [&](const Term& x, const Term& y) {
            return law.cmp(x.first, y.first) < 0;
        });
        RingElement out(std::move(law));
        for (auto& [key, c] : raw) {
            if (!out.terms_.empty() && out.law_.cmp(out.terms_.back().first, key) == 0)
                out.terms_.back().second += c;
            else
                out.terms_.emplace_back(std::move(key), c);
        }
        std::erase_if(out.terms_, [](const Term& t) { return t.second == 0; });
        return out;
    }

    bool operator==(const RingElement& other) const {
        if (terms_.size() != other.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].second != other.terms_[i].second ||
                law_.cmp(terms_[i].first, other.terms_[i].first) != 0)
                return false;
        return true;
    }

    /// Text form: signed `c·<literal>` terms in canonical key order,
    /// e.g. "1·e -1·x2"; the zero element prints as "0".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) out += ' ';
            Int c = terms_[i].second;
            if (c >= 0 && i) out += '+';
            out += std::to_string(c);
            out += "·";
            out += law_.print(terms_[i].first);
        }
        return out;
    }

private:
    Law law_;
    std::vector<Term> terms_;
};

using FreeRing = RingElement<FreeGroupLaw>;
using QuotientRing = RingElement<OracleLaw>;

/// The derivation with d(x_j)/d(x_i) = delta_ij, extended by the left
/// product rule d(uv) = d(u) + u d(v); consequently d(x_i^-1) = -x_i^-1.
/// Computed by a single scan over the letters.
inline FreeRing fox_derivative(const ReducedWord& w, int i) {
    if (i < 1 || i > w.rank()) throw input_error("fox_derivative: index out of range");
    FreeGroupLaw law{w.rank()};
    std::vector<FreeRing::Term> terms;
    ReducedWord prefix(w.rank());
    for (int letter : w.letters()) {
        int idx = letter > 0 ? letter : -letter;
        if (letter > 0) {
            if (idx == i) terms.emplace_back(prefix, 1);
            prefix = prefix.concat(ReducedWord::generator(w.rank(), idx));
        } else {
            prefix = prefix.concat(ReducedWord::generator(w.rank(), idx, -1));
            if (idx == i) terms.emplace_back(prefix, -1);
        }
    }
    return FreeRing::collect(law, std::move(terms));
}

/// Linear extension of the derivation to all of Z(F).
inline FreeRing fox_derivative(const FreeRing& a, int i) {
    FreeRing out = FreeRing::zero(a.law());
    for (const auto& [w, c] : a.terms()) out = out.add(fox_derivative(w, i).scaled(c));
    return out;
}

/// Push a Z(F) element through the quotient map onto Z(F/N), collecting
/// coefficients on canonical forms.
inline QuotientRing push_to_quotient(const FreeRing& a, const GroupOracle& target) {
    std::vector<QuotientRing::Term> terms;
    terms.reserve(a.terms().size());
    for (const auto& [w, c] : a.terms()) terms.emplace_back(target.from_word(w), c);
    return QuotientRing::collect(OracleLaw{target}, std::move(terms));
}

/// The starred derivative: Fox-differentiate, then project the keys.
inline QuotientRing fox_star(const ReducedWord& w, int i, const GroupOracle& target) {
    if (w.rank() != target.generator_count())
        throw input_error("fox_star: word rank does not match the quotient rank");
    return push_to_quotient(fox_derivative(w, i), target);
}

/// Project a ring element over F/N' to the ring over F/N via the
/// representative words of its keys.
inline QuotientRing project_ring(const QuotientRing& a, const GroupOracle& target) {
    std::vector<QuotientRing::Term> terms;
    terms.reserve(a.terms().size());
    for (const auto& [g, c] : a.terms())
        terms.emplace_back(target.from_word(g.word()), c);
    return QuotientRing::collect(OracleLaw{target}, std::move(terms));
}

/// Rewrite an element of the kernel of the projection Z(F/N') -> Z(F/N)
/// as a sum of unit-coefficient terms r_j (h_j - 1) with every h_j in
/// the kernel of the projection. Terms are grouped by image coset; each
/// pair is repeated |coefficient| times, with negative multiples folded
/// through (r h, h^-1).
inline std::vector<std::pair<GroupElement, GroupElement>>
kernel_decompose(const QuotientRing& a, const GroupOracle& quotient) {
    const GroupOracle& source = a.law().oracle;
    QuotientRing image = project_ring(a, quotient);
    if (!image.is_zero())
        throw input_error("kernel_decompose: element is not in the kernel; image has "
                          "coefficient " +
                          std::to_string(image.terms().front().second) + " at " +
                          quotient.print(image.terms().front().first));

    // Group the terms of `a` by their image in F/N.
    std::vector<std::pair<GroupElement, std::vector<QuotientRing::Term>>> classes;
    for (const auto& [g, c] : a.terms()) {
        GroupElement img = quotient.from_word(g.word());
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const auto& cl) { return cl.first == img; });
        if (it == classes.end()) {
            classes.push_back({std::move(img), {{g, c}}});
        } else {
            it->second.emplace_back(g, c);
        }
    }

    std::vector<std::pair<GroupElement, GroupElement>> out;
    for (const auto& [img, members] : classes) {
        const GroupElement& x = members.front().first; // canonical least in the class
        GroupElement x_inv = source.inv(x);
        for (std::size_t i = 1; i < members.size(); ++i) {
            const auto& [g, c] = members[i];
            GroupElement h = source.mul(x_inv, g);
            if (c > 0) {
                for (Int k = 0; k < c; ++k) out.emplace_back(x, h);
            } else {
                GroupElement xh = source.mul(x, h);
                GroupElement h_inv = source.inv(h);
                for (Int k = 0; k < -c; ++k) out.emplace_back(xh, h_inv);
            }
        }
    }
    return out;
}

} // namespace clf
