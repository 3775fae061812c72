#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clf/clf.hpp>

using namespace clf;

namespace {

// Independent reduction oracle: repeatedly delete the first adjacent
// cancelling pair until none is left.
std::vector<int> naive_reduce(std::vector<int> letters) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
            if (letters[i] == -letters[i + 1]) {
                letters.erase(letters.begin() + static_cast<long>(i),
                              letters.begin() + static_cast<long>(i) + 2);
                changed = true;
                break;
            }
        }
    }
    return letters;
}

std::vector<int> random_letters(Xoshiro256ss& rng, int rank, int len) {
    std::vector<int> out;
    for (int i = 0; i < len; ++i) {
        int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * rank)));
        out.push_back(pick < rank ? pick + 1 : -(pick - rank + 1));
    }
    return out;
}

} // namespace

TEST_CASE("reduction of cancelling pairs") {
    CHECK(ReducedWord::parse(2, "x1 X1").empty());
    CHECK(ReducedWord::parse(2, "x1 x2 X2 X1").empty());
    CHECK(ReducedWord::parse(2, "x1 x2 X2 x1").str() == "x1 x1");
}

TEST_CASE("reduction agrees with the deletion oracle") {
    Xoshiro256ss rng(101);
    for (int it = 0; it < 500; ++it) {
        int rank = 1 + static_cast<int>(rng.below(3));
        auto raw = random_letters(rng, rank, static_cast<int>(rng.below(16)));
        ReducedWord w = ReducedWord::reduce(rank, raw);
        CHECK(w.letters() == naive_reduce(raw));
    }
}

TEST_CASE("reduction is idempotent") {
    Xoshiro256ss rng(102);
    for (int it = 0; it < 200; ++it) {
        ReducedWord w = random_reduced_word(rng, 2, 12);
        CHECK(ReducedWord::reduce(2, w.letters()) == w);
    }
}

TEST_CASE("letters outside the rank are rejected") {
    CHECK_THROWS_AS(ReducedWord::parse(2, "x3"), input_error);
    CHECK_THROWS_AS(ReducedWord::reduce(1, {2}), input_error);
    CHECK_THROWS_AS(ReducedWord::reduce(1, {0}), input_error);
    CHECK_THROWS_AS(ReducedWord::parse(2, "y1"), input_error);
}

TEST_CASE("concatenation properties") {
    Xoshiro256ss rng(103);
    for (int it = 0; it < 500; ++it) {
        ReducedWord u = random_reduced_word(rng, 3, 10);
        ReducedWord v = random_reduced_word(rng, 3, 10);
        ReducedWord uv = u.concat(v);
        CHECK(uv.size() <= u.size() + v.size());
        CHECK(u.concat(u.inverse()).empty());
        CHECK(uv.concat(v.inverse()) == u);
    }
}

TEST_CASE("powers and commutators") {
    ReducedWord x1 = ReducedWord::generator(2, 1);
    ReducedWord x2 = ReducedWord::generator(2, 2);
    CHECK(x1.power(3).str() == "x1 x1 x1");
    CHECK(x1.power(-2).str() == "X1 X1");
    CHECK(x1.power(0).empty());
    CHECK(commutator(x1, x2).str() == "x1 x2 X1 X2");
    CHECK(commutator(x1, x1).empty());
}

TEST_CASE("text form round-trips") {
    CHECK(ReducedWord(3).str() == "e");
    CHECK(ReducedWord::parse(3, "e").empty());
    Xoshiro256ss rng(104);
    for (int it = 0; it < 200; ++it) {
        ReducedWord w = random_reduced_word(rng, 3, 10);
        CHECK(ReducedWord::parse(3, w.str()) == w);
    }
}

TEST_CASE("shortlex ordering") {
    ReducedWord a = ReducedWord::parse(2, "x1");
    ReducedWord b = ReducedWord::parse(2, "x1 x2");
    ReducedWord c = ReducedWord::parse(2, "x2");
    CHECK(a.compare(b) < 0);
    CHECK(a.compare(c) < 0);
    CHECK(b.compare(b) == 0);
}
