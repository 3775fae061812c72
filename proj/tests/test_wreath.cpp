#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clf/clf.hpp>

#include "fixtures.hpp"

#include <algorithm>

using namespace clf;

namespace {

struct Lamplighter {
    GroupOracle A{"C:2"};
    GroupOracle B{"Zr:1"};

    WreathElement make(std::vector<Int> lit_positions, Int cursor) const {
        std::vector<std::pair<GroupElement, GroupElement>> entries;
        for (Int p : lit_positions)
            entries.emplace_back(GroupElement(B.descriptor(), std::vector<Int>{p}),
                                 GroupElement(A.descriptor(), Int{1}));
        return {FinSuppMap::from_entries(B, A, std::move(entries)),
                GroupElement(B.descriptor(), std::vector<Int>{cursor})};
    }
};

// Exhaustive visiting-path oracle: try every visit order.
Int brute_visiting_path(std::vector<GroupElement> pts, const GroupElement& endpoint,
                        const GroupOracle& G) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a == b; }),
              pts.end());
    if (pts.empty()) return G.word_length(endpoint);
    Int best = -1;
    do {
        Int total = 0;
        GroupElement at = G.identity();
        for (const auto& p : pts) {
            total += G.word_length(G.mul(G.inv(at), p));
            at = p;
        }
        total += G.word_length(G.mul(G.inv(at), endpoint));
        if (best < 0 || total < best) best = total;
    } while (std::next_permutation(pts.begin(), pts.end(),
                                   [](const auto& a, const auto& b) { return a < b; }));
    return best;
}

} // namespace

TEST_CASE("product follows the shift law") {
    Lamplighter L;
    WreathElement t = L.make({0}, 1); // lamp at the origin, step right
    WreathElement sq = wreath_mul(t, t);
    CHECK(sq.cursor == L.B.parse("2"));
    REQUIRE(sq.lamp.support_size() == 2);
    CHECK(sq.lamp.at(L.B.parse("0")) == L.A.parse("1"));
    CHECK(sq.lamp.at(L.B.parse("1")) == L.A.parse("1"));
}

TEST_CASE("identity and inverse laws") {
    Lamplighter L;
    WreathElement id = wreath_identity(L.B, L.A);
    WreathElement u = L.make({0, 2}, -1);
    CHECK(wreath_mul(id, u) == u);
    CHECK(wreath_mul(u, id) == u);
    CHECK(wreath_mul(u, wreath_inv(u)) == id);
    CHECK(wreath_mul(wreath_inv(u), u) == id);
}

TEST_CASE("inverse examples") {
    Lamplighter L;
    CHECK(wreath_inv(L.make({}, 5)) == L.make({}, -5));
    CHECK(wreath_inv(L.make({0}, 0)) == L.make({0}, 0)); // involution
    CHECK(wreath_inv(L.make({0}, 1)) == L.make({-1}, -1));
}

TEST_CASE("inverse law on random elements") {
    Xoshiro256ss rng(301);
    GroupOracle A("C:3"), B("Zr:2");
    WreathElement id = wreath_identity(B, A);
    for (int it = 0; it < 200; ++it) {
        WreathElement u = random_wreath_element(rng, B, A, 3, 2, 1, 2);
        CHECK(wreath_mul(u, wreath_inv(u)) == id);
    }
}

TEST_CASE("mixed wreath products are rejected") {
    Lamplighter L;
    GroupOracle A2("C:3");
    WreathElement other{FinSuppMap(L.B, A2), L.B.identity()};
    CHECK_THROWS_AS(wreath_mul(L.make({}, 0), other), input_error);
}

TEST_CASE("visiting path length examples") {
    GroupOracle Z("Zr:1"), Z2("Zr:2");
    CHECK(visiting_path_length({}, Z.parse("4"), Z, 12) == 4);
    CHECK(visiting_path_length({Z.parse("1")}, Z.parse("0"), Z, 12) == 2);
    CHECK(visiting_path_length({Z2.parse("(1,0)"), Z2.parse("(0,1)")},
                               Z2.parse("(0,0)"), Z2, 12) == 4);
}

TEST_CASE("visiting path DP agrees with the permutation oracle") {
    Xoshiro256ss rng(302);
    GroupOracle Z2("Zr:2");
    for (int it = 0; it < 100; ++it) {
        int m = static_cast<int>(rng.below(6));
        std::vector<GroupElement> pts;
        for (int i = 0; i < m; ++i) pts.push_back(random_ball_element(rng, Z2, 3));
        GroupElement endpoint = random_ball_element(rng, Z2, 3);
        CHECK(visiting_path_length(pts, endpoint, Z2, 12) ==
              brute_visiting_path(pts, endpoint, Z2));
    }
}

TEST_CASE("visiting path cap is a resource error") {
    GroupOracle Z("Zr:1");
    std::vector<GroupElement> pts;
    for (Int i = 1; i <= 5; ++i) pts.push_back(Z.parse(std::to_string(i)));
    CHECK_THROWS_AS(visiting_path_length(pts, Z.identity(), Z, 4), resource_error);
}

TEST_CASE("wreath word length examples") {
    Lamplighter L;
    CHECK(wreath_word_length(L.make({1}, 0)) == 3);
    CHECK(wreath_word_length(L.make({}, -7)) == 7);

    GroupOracle A("C:2"), B("Zr:2");
    std::vector<std::pair<GroupElement, GroupElement>> entries{
        {B.parse("(1,0)"), A.parse("1")}, {B.parse("(0,1)"), A.parse("1")}};
    WreathElement u{FinSuppMap::from_entries(B, A, std::move(entries)),
                    B.parse("(0,0)")};
    CHECK(wreath_word_length(u) == 6);
}

TEST_CASE("wreath metric agrees with Cayley-graph BFS") {
    Lamplighter L;
    auto ball = wreath_ball(L.B, L.A, 5, 2'000'000);
    for (const auto& [u, d] : ball) {
        CHECK(wreath_word_length(u) == d);
    }
}

TEST_CASE("pinned lamplighter ball sizes") {
    Lamplighter L;
    auto ball = wreath_ball(L.B, L.A, 6, 2'000'000);
    std::map<Int, Int> count;
    for (const auto& [u, d] : ball) ++count[d];
    Int running = 0;
    for (int r = 0; r <= 6; ++r) {
        running += count[r];
        CHECK(running == fixtures::kLamplighterBallSizes[r]);
    }
}

TEST_CASE("length is sub-additive on random pairs") {
    Xoshiro256ss rng(303);
    Lamplighter L;
    for (int it = 0; it < 500; ++it) {
        WreathElement u = random_wreath_element(rng, L.B, L.A, 3, 3, 1, 3);
        WreathElement v = random_wreath_element(rng, L.B, L.A, 3, 3, 1, 3);
        CHECK(wreath_word_length(wreath_mul(u, v)) <=
              wreath_word_length(u) + wreath_word_length(v));
    }
}

TEST_CASE("support of a product stays inside the shifted union") {
    Xoshiro256ss rng(304);
    GroupOracle A("C:3"), B("Zr:2");
    for (int it = 0; it < 200; ++it) {
        WreathElement u = random_wreath_element(rng, B, A, 3, 2, 1, 2);
        WreathElement v = random_wreath_element(rng, B, A, 3, 2, 1, 2);
        std::set<GroupElement> allowed;
        for (const auto& s : u.lamp.support()) allowed.insert(s);
        for (const auto& s : v.lamp.support()) allowed.insert(B.mul(u.cursor, s));
        for (const auto& s : wreath_mul(u, v).lamp.support())
            CHECK(allowed.count(s) == 1);
    }
}

TEST_CASE("JSON form matches the documented literal") {
    Lamplighter L;
    Json j = Json::parse(R"({"base":"1","lamps":[{"at":"0","val":"1"}]})");
    WreathElement u = wreath_from_json(L.B, L.A, j);
    CHECK(u == L.make({0}, 1));
    CHECK(wreath_to_json(u).dump() == R"({"base":"1","lamps":[{"at":"0","val":"1"}]})");
}

TEST_CASE("JSON round-trips on random elements") {
    Xoshiro256ss rng(305);
    GroupOracle A("C:3"), B("Zr:2");
    for (int it = 0; it < 200; ++it) {
        WreathElement u = random_wreath_element(rng, B, A, 3, 2, 1, 2);
        Json j = wreath_to_json(u);
        CHECK(wreath_from_json(B, A, j) == u);
        CHECK(wreath_to_json(wreath_from_json(B, A, j)).dump() == j.dump());
    }
}

TEST_CASE("JSON accepts arrays and numbers for abelian coordinates") {
    GroupOracle A("C:2"), B("Zr:2");
    WreathElement u = wreath_from_json(
        B, A, Json::parse(R"({"base":[1,0],"lamps":[{"at":[0,1],"val":1}]})"));
    CHECK(u.cursor == B.parse("(1,0)"));
    CHECK(u.lamp.at(B.parse("(0,1)")) == A.parse("1"));
    // canonical emission uses the text literals
    CHECK(wreath_to_json(u).dump() ==
          R"x({"base":"(1,0)","lamps":[{"at":"(0,1)","val":"1"}]})x");
}

TEST_CASE("JSON validation") {
    Lamplighter L;
    CHECK_THROWS_AS(wreath_from_json(L.B, L.A, Json::parse(R"({"lamps":[]})")),
                    input_error);
    CHECK_THROWS_AS(
        wreath_from_json(L.B, L.A,
                         Json::parse(R"({"base":"0","lamps":[{"at":"0","val":"1"},
                                        {"at":"0","val":"1"}]})")),
        input_error);
    // identity lamp values are dropped, not an error
    WreathElement u = wreath_from_json(
        L.B, L.A, Json::parse(R"({"base":"0","lamps":[{"at":"2","val":"0"}]})"));
    CHECK(u.lamp.trivial());
}
