#pragma once

#include <clf/errors.hpp>

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace clf {

using Int = std::int64_t;

/// A freely reduced word over generators x1..xr and their inverses.
///
/// Letters are signed indices: +i stands for x_i, -i for its inverse.
/// The letter sequence never contains an adjacent cancelling pair, so two
/// words are equal in the free group iff they are equal as sequences.
///
/// Text form: whitespace-separated tokens `x<i>` and `X<i>`, e.g.
/// "x1 X2 x1"; the empty word prints as "e".
class ReducedWord {
public:
    ReducedWord() = default;

    explicit ReducedWord(int rank) : rank_(rank) {
        if (rank < 0) throw input_error("ReducedWord: negative rank");
    }

    /// Freely reduce a raw letter sequence. Indices must lie in 1..rank.
    static ReducedWord reduce(int rank, const std::vector<int>& raw) {
        ReducedWord w(rank);
        w.letters_.reserve(raw.size());
        for (int letter : raw) w.push_reduced(letter);
        return w;
    }

    static ReducedWord generator(int rank, int index, int sign = +1) {
        ReducedWord w(rank);
        w.push_reduced(sign >= 0 ? index : -index);
        return w;
    }

    /// Parse the token form. "e" denotes the empty word and may appear
    /// alongside ordinary letters (it contributes nothing).
    static ReducedWord parse(int rank, std::string_view text) {
        ReducedWord w(rank);
        std::istringstream in{std::string(text)};
        std::string tok;
        while (in >> tok) {
            if (tok == "e" || tok == "1") continue;
            if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'X'))
                throw input_error("word literal: bad token '" + tok + "'");
            int idx = 0;
            for (std::size_t p = 1; p < tok.size(); ++p) {
                if (tok[p] < '0' || tok[p] > '9')
                    throw input_error("word literal: bad token '" + tok + "'");
                idx = idx * 10 + (tok[p] - '0');
            }
            if (idx < 1) throw input_error("word literal: generator index must be >= 1");
            w.push_reduced(tok[0] == 'x' ? idx : -idx);
        }
        return w;
    }

    int rank() const { return rank_; }
    const std::vector<int>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    /// Product in the free group (concatenate, cancel at the seam).
    ReducedWord concat(const ReducedWord& other) const {
        check_rank(other);
        ReducedWord w = *this;
        for (int letter : other.letters_) w.push_reduced(letter);
        return w;
    }

    ReducedWord inverse() const {
        ReducedWord w(rank_);
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            w.letters_.push_back(-*it);
        return w;
    }

    ReducedWord power(Int k) const {
        ReducedWord base = k >= 0 ? *this : inverse();
        Int reps = k >= 0 ? k : -k;
        ReducedWord out(rank_);
        for (Int i = 0; i < reps; ++i) out = out.concat(base);
        return out;
    }

    /// c^-1 * this * c
    ReducedWord conjugated_by(const ReducedWord& c) const {
        return c.inverse().concat(*this).concat(c);
    }

    std::string str() const {
        if (letters_.empty()) return "e";
        std::string out;
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            if (i) out += ' ';
            int letter = letters_[i];
            out += letter > 0 ? 'x' : 'X';
            out += std::to_string(letter > 0 ? letter : -letter);
        }
        return out;
    }

    /// Shortlex order: by length, then lexicographically by letters.
    std::strong_ordering compare(const ReducedWord& other) const {
        if (auto c = rank_ <=> other.rank_; c != 0) return c;
        if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
        for (std::size_t i = 0; i < letters_.size(); ++i)
            if (auto c = letters_[i] <=> other.letters_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
        return a.compare(b) == 0;
    }
    friend bool operator<(const ReducedWord& a, const ReducedWord& b) {
        return a.compare(b) < 0;
    }

private:
    void check_rank(const ReducedWord& other) const {
        if (rank_ != other.rank_)
            throw input_error("ReducedWord: rank mismatch (" + std::to_string(rank_) +
                              " vs " + std::to_string(other.rank_) + ")");
    }

    void push_reduced(int letter) {
        if (letter == 0 || std::abs(letter) > rank_)
            throw input_error("ReducedWord: letter index out of range 1.." +
                              std::to_string(rank_));
        if (!letters_.empty() && letters_.back() == -letter)
            letters_.pop_back();
        else
            letters_.push_back(letter);
    }

    int rank_ = 0;
    std::vector<int> letters_;
};

/// [u, v] = u v u^-1 v^-1
inline ReducedWord commutator(const ReducedWord& u, const ReducedWord& v) {
    return u.concat(v).concat(u.inverse()).concat(v.inverse());
}

} // namespace clf
