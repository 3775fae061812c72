#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clf/clf.hpp>

using namespace clf;

namespace {

const ReducedWord x1 = ReducedWord::generator(2, 1);
const ReducedWord x2 = ReducedWord::generator(2, 2);

} // namespace

TEST_CASE("algebraic image of a generator") {
    MagnusImage img = magnus_algebraic(x1, 2, 1);
    GroupOracle Q = magnus_quotient_oracle(2, 1);
    CHECK(img.quotient == Q.parse("x1"));
    CHECK(img.coords[0] == QuotientRing::unit(OracleLaw{Q}));
    CHECK(img.coords[1].is_zero());
}

TEST_CASE("algebraic image of the commutator") {
    MagnusImage img = magnus_algebraic(commutator(x1, x2), 2, 1);
    GroupOracle Q = magnus_quotient_oracle(2, 1);
    OracleLaw law{Q};
    CHECK(Q.is_identity(img.quotient));
    CHECK(img.coords[0] == QuotientRing::unit(law).sub(QuotientRing::of(law, Q.parse("x2"))));
    CHECK(img.coords[1] == QuotientRing::of(law, Q.parse("x1")).sub(QuotientRing::unit(law)));
}

TEST_CASE("empty word maps to the identity") {
    MagnusImage img = magnus_algebraic(ReducedWord(2), 2, 1);
    CHECK(magnus_quotient_oracle(2, 1).is_identity(img.quotient));
    CHECK(img.coords[0].is_zero());
    CHECK(img.coords[1].is_zero());
    WreathElement geo = magnus_geometric(ReducedWord(2), 2, 1);
    CHECK(geo.lamp.trivial());
    CHECK(geo.lamp.base().is_identity(geo.cursor));
}

TEST_CASE("geometric image traces the path") {
    GroupOracle Q = magnus_quotient_oracle(2, 1);
    GroupOracle Zr2("Zr:2");

    WreathElement geo = magnus_geometric(x1.concat(x2), 2, 1);
    CHECK(geo.cursor == Q.parse("x1 x2"));
    REQUIRE(geo.lamp.support_size() == 2);
    CHECK(geo.lamp.at(Q.identity()) == Zr2.parse("(1,0)"));
    CHECK(geo.lamp.at(Q.parse("x1")) == Zr2.parse("(0,1)"));

    WreathElement comm = magnus_geometric(commutator(x1, x2), 2, 1);
    CHECK(Q.is_identity(comm.cursor));
    REQUIRE(comm.lamp.support_size() == 3);
    CHECK(comm.lamp.at(Q.identity()) == Zr2.parse("(1,-1)"));
    CHECK(comm.lamp.at(Q.parse("x1")) == Zr2.parse("(0,1)"));
    CHECK(comm.lamp.at(Q.parse("x2")) == Zr2.parse("(-1,0)"));
}

TEST_CASE("the two embeddings agree") {
    CHECK(selfcheck::embedding_equivalence(0xAB5EED01ull, 200, 2, 1, 10));
    // depth 2 spot checks
    CHECK(selfcheck::embedding_equivalence(0xAB5EED02ull, 20, 2, 2, 6));
}

TEST_CASE("images satisfy the pushed fundamental formula") {
    // sum_i coord_i * (alpha(x_i) - 1) = quotient - 1 in the quotient ring
    Xoshiro256ss rng(501);
    GroupOracle Q = magnus_quotient_oracle(2, 1);
    OracleLaw law{Q};
    for (int it = 0; it < 100; ++it) {
        ReducedWord w = random_reduced_word(rng, 2, 10);
        MagnusImage img = magnus_algebraic(w, 2, 1);
        QuotientRing lhs = QuotientRing::zero(law);
        for (int i = 1; i <= 2; ++i) {
            QuotientRing xim1 = QuotientRing::of(law, Q.from_word(ReducedWord::generator(2, i)))
                                    .sub(QuotientRing::unit(law));
            lhs = lhs.add(img.coords[i - 1].mul(xim1));
        }
        QuotientRing rhs =
            QuotientRing::of(law, img.quotient).sub(QuotientRing::unit(law));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("normal forms decide the word problem") {
    GroupOracle S22("S:2,2");
    CHECK(S22.is_identity(solvable_normal_form(ReducedWord::parse(2, "x1 X1"), 2, 2)));
    CHECK_FALSE(S22.is_identity(solvable_normal_form(commutator(x1, x2), 2, 2)));

    // an element of the second derived subgroup: trivial at depth 2,
    // nontrivial at depth 3
    ReducedWord c1 = commutator(x1, x2);
    ReducedWord c2 = x1.concat(c1).concat(x1.inverse());
    ReducedWord w = commutator(c1, c2);
    REQUIRE_FALSE(w.empty());
    CHECK(S22.is_identity(solvable_normal_form(w, 2, 2)));
    GroupOracle S23("S:2,3");
    CHECK_FALSE(S23.is_identity(solvable_normal_form(w, 2, 3)));

    // metabelian law: commutators of derived-subgroup elements vanish
    Xoshiro256ss rng(502);
    for (int it = 0; it < 20; ++it) {
        ReducedWord a = commutator(random_reduced_word(rng, 2, 4),
                                   random_reduced_word(rng, 2, 4));
        ReducedWord b = commutator(random_reduced_word(rng, 2, 4),
                                   random_reduced_word(rng, 2, 4));
        CHECK(S22.is_identity(S22.from_word(commutator(a, b))));
    }
}

TEST_CASE("normal form is a homomorphism") {
    Xoshiro256ss rng(503);
    GroupOracle S22("S:2,2");
    for (int it = 0; it < 200; ++it) {
        ReducedWord u = random_reduced_word(rng, 2, 8);
        ReducedWord v = random_reduced_word(rng, 2, 8);
        CHECK(S22.from_word(u.concat(v)) == S22.mul(S22.from_word(u), S22.from_word(v)));
    }
}

TEST_CASE("geometric image multiplies like the wreath product") {
    Xoshiro256ss rng(504);
    for (int it = 0; it < 100; ++it) {
        ReducedWord u = random_reduced_word(rng, 2, 8);
        ReducedWord v = random_reduced_word(rng, 2, 8);
        CHECK(magnus_geometric(u.concat(v), 2, 1) ==
              wreath_mul(magnus_geometric(u, 2, 1), magnus_geometric(v, 2, 1)));
    }
}

TEST_CASE("random non-kernel words have nontrivial images") {
    Xoshiro256ss rng(505);
    GroupOracle S22("S:2,2");
    int produced = 0;
    while (produced < 50) {
        ReducedWord w = random_reduced_word(rng, 2, 8, 1);
        GroupElement abel = magnus_quotient_oracle(2, 1).from_word(w);
        if (magnus_quotient_oracle(2, 1).is_identity(abel)) continue; // outside F'
        ++produced;
        CHECK_FALSE(S22.is_identity(S22.from_word(w)));
    }
}

TEST_CASE("undistorted embedding on a small ball") {
    CHECK(selfcheck::bilipschitz(2, 2, 3));
}

TEST_CASE("divergence of word images") {
    GroupOracle Q = magnus_quotient_oracle(2, 1);
    Xoshiro256ss rng(506);
    for (int it = 0; it < 100; ++it) {
        ReducedWord w = random_reduced_word(rng, 2, 8);
        WreathElement img = magnus_geometric(w, 2, 1);
        auto div = divergence(img);
        if (Q.is_identity(img.cursor)) {
            CHECK(div.empty());
        } else {
            REQUIRE(div.size() == 2);
            // sorted by canonical key; locate e and the endpoint
            Int at_e = 0, at_b = 0;
            for (const auto& [g, s] : div) {
                if (Q.is_identity(g)) at_e = s;
                if (g == img.cursor) at_b = s;
            }
            CHECK(at_e == 1);
            CHECK(at_b == -1);
        }
    }
    WreathElement empty_lamp{FinSuppMap(Q, GroupOracle("Zr:2")), Q.parse("x1")};
    CHECK(divergence(empty_lamp).empty());

    // a deeper image: the flow law is blind to the quotient's depth
    GroupOracle S22("S:2,2");
    WreathElement deep = magnus_geometric(ReducedWord::parse(2, "x1 x2 X1"), 2, 2);
    auto ddiv = divergence(deep);
    REQUIRE(ddiv.size() == 2);
    CHECK(ddiv[0].second + ddiv[1].second == 0);
}

TEST_CASE("cyclic distortion ceiling") {
    CHECK(solvable_cyclic_distortion_bound(0) == 0);
    CHECK(solvable_cyclic_distortion_bound(5) == 10);

    // |x^k| >= |k| / 2 for sampled x and small k; k/2 <= 3, so membership
    // in the radius-3 ball settles every case without long BFS runs
    GroupOracle S22("S:2,2");
    std::map<GroupElement, Int> near;
    for (const auto& [g, d] : S22.ball(3)) near.emplace(g, d);
    for (const auto& [x, len] : S22.ball(2)) {
        if (S22.is_identity(x)) continue;
        GroupElement p = S22.identity();
        for (Int k = 1; k <= 6; ++k) {
            p = S22.mul(p, x);
            auto it = near.find(p);
            if (it != near.end()) CHECK(2 * it->second >= k);
        }
    }
}

TEST_CASE("the two trace implementations build the same structure") {
    // nf_of_word at depth d+1 and magnus_geometric at depth d run
    // separate trace loops; their outputs must agree key for key
    Xoshiro256ss rng(507);
    for (int it = 0; it < 60; ++it) {
        ReducedWord w = random_reduced_word(rng, 2, 8);
        for (int depth = 1; depth <= 2; ++depth) {
            NFPtr nf = detail::nf_of_word(2, depth + 1, w);
            WreathElement geo = magnus_geometric(w, 2, depth);
            CHECK(nf_equal(*nf->cursor, geo.cursor.nf()));
            REQUIRE(nf->lamp.size() == geo.lamp.support_size());
            for (std::size_t i = 0; i < nf->lamp.size(); ++i) {
                CHECK(nf_equal(*nf->lamp[i].first,
                               geo.lamp.entries()[i].first.nf()));
                CHECK(nf->lamp[i].second == geo.lamp.entries()[i].second.vec());
            }
        }
    }
}

TEST_CASE("deep products one letter at a time") {
    GroupOracle S23("S:2,3");
    Xoshiro256ss rng(508);
    for (int it = 0; it < 25; ++it) {
        ReducedWord w = random_reduced_word(rng, 2, 8);
        GroupElement acc = S23.identity();
        for (int letter : w.letters())
            acc = S23.mul(acc, S23.generator(letter > 0 ? letter : -letter,
                                             letter > 0 ? +1 : -1));
        CHECK(acc == S23.from_word(w));
    }
}

TEST_CASE("memoized normal forms are stable") {
    GroupOracle S22("S:2,2");
    ReducedWord w = ReducedWord::parse(2, "x1 x2 X1 x2");
    GroupElement a = S22.from_word(w);
    GroupElement b = S22.from_word(w);
    CHECK(a == b);
    CHECK(nf_compare(a.nf(), b.nf()) == 0);
}
