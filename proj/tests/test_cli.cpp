#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clf/cli.hpp>

using clf::cli::CliResult;
using clf::cli::dispatch;

TEST_CASE("normalize") {
    SUBCASE("solvable identity emits the trivial wreath form") {
        CliResult r = dispatch({"normalize", "S:2,2", "x1 X1"});
        CHECK(r.code == 0);
        CHECK(r.out == "{\"base\":[0,0],\"lamps\":[]}\n");
    }
    SUBCASE("depth 1 emits an integer vector") {
        CliResult r = dispatch({"normalize", "S:2,1", "x1 x2 x1"});
        CHECK(r.code == 0);
        CHECK(r.out == "[2,1]\n");
    }
    SUBCASE("nontrivial depth-2 form nests lamp vectors") {
        CliResult r = dispatch({"normalize", "S:2,2", "x1 x2"});
        CHECK(r.code == 0);
        CHECK(r.out ==
              "{\"base\":[1,1],\"lamps\":[{\"at\":[0,0],\"val\":[1,0]},"
              "{\"at\":[1,0],\"val\":[0,1]}]}\n");
    }
    SUBCASE("wreath literals are canonicalized") {
        CliResult r = dispatch({"normalize", "W:Z2~Z",
                                R"({"base":"1","lamps":[{"at":"3","val":"1"},{"at":"0","val":"1"}]})"});
        CHECK(r.code == 0);
        CHECK(r.out ==
              "{\"base\":\"1\",\"lamps\":[{\"at\":\"0\",\"val\":\"1\"},"
              "{\"at\":\"3\",\"val\":\"1\"}]}\n");
    }
    SUBCASE("base-group literals echo canonically") {
        CHECK(dispatch({"normalize", "Zr:2", "(1, 0)"}).out == "(1,0)\n");
        CHECK(dispatch({"normalize", "C:5", "-2"}).out == "3\n");
        CHECK(dispatch({"normalize", "P3", "(1 2)(2 3)"}).out == "(1 2 3)\n");
    }
}

TEST_CASE("mul and wordlen") {
    CHECK(dispatch({"mul", "Zr:2", "(1,0)", "(0,1)"}).out == "(1,1)\n");
    CHECK(dispatch({"mul", "S:2,2", "x1", "X1 x2"}).out == "x2\n");
    CHECK(dispatch({"wordlen", "Zr:2", "(3,-2)"}).out == "5\n");
    CHECK(dispatch({"wordlen", "S:2,2", "x1 x2"}).out == "2\n");
    CliResult r = dispatch({"wordlen", "W:Z2~Z",
                            R"({"base":"0","lamps":[{"at":"1","val":"1"}]})"});
    CHECK(r.out == "3\n");
}

TEST_CASE("conj-check emits a JSON verdict") {
    SUBCASE("conjugate lamplighter pair") {
        CliResult r = dispatch({"conj-check", "W:Z2~Z",
                                R"({"base":"1","lamps":[{"at":"0","val":"1"}]})",
                                R"({"base":"1","lamps":[{"at":"3","val":"1"}]})"});
        CHECK(r.code == 0);
        auto j = clf::Json::parse(r.out);
        CHECK(j.at("conjugate") == clf::Json(true));
        CHECK(j.at("certificate").at("verified") == clf::Json(true));
        CHECK(j.at("z_length").get<clf::Int>() <= j.at("n").get<clf::Int>());
        CHECK(j.at("bound").get<clf::Int>() > 0);
    }
    SUBCASE("non-conjugate pair") {
        CliResult r = dispatch({"conj-check", "W:Z2~Z",
                                R"({"base":"1","lamps":[{"at":"0","val":"1"}]})",
                                R"({"base":"1","lamps":[]})"});
        auto j = clf::Json::parse(r.out);
        CHECK(j.at("conjugate") == clf::Json(false));
        CHECK(j.at("certificate").is_null());
        CHECK(r.code == 0); // verdicts are data, not errors
    }
    SUBCASE("solvable pair") {
        CliResult r = dispatch({"conj-check", "S:2,2", "x1 x2", "X1 x1 x2 x1"});
        auto j = clf::Json::parse(r.out);
        CHECK(j.at("conjugate") == clf::Json(true));
        CHECK(j.at("certificate").at("verified") == clf::Json(true));
    }
    SUBCASE("perm3 base group") {
        CliResult r = dispatch({"conj-check", "P3", "(1 2)", "(1 3)"});
        auto j = clf::Json::parse(r.out);
        CHECK(j.at("conjugate") == clf::Json(true));
    }
    SUBCASE("wreath product over a solvable base") {
        CliResult r = dispatch({"conj-check", "W:C:2~S:2,2",
                                R"({"base":"x1","lamps":[{"at":"e","val":"1"}]})",
                                R"({"base":"x1","lamps":[{"at":"x2","val":"1"}]})"});
        CHECK(r.code == 0);
        auto j = clf::Json::parse(r.out);
        CHECK((j.at("conjugate") == clf::Json(true) ||
               j.at("conjugate") == clf::Json(false)));
    }
}

TEST_CASE("conj-search") {
    CliResult r = dispatch({"conj-search", "W:Z2~Z",
                            R"({"base":"1","lamps":[{"at":"0","val":"1"}]})",
                            R"({"base":"1","lamps":[{"at":"1","val":"1"}]})",
                            "--cap", "6"});
    auto j = clf::Json::parse(r.out);
    CHECK(j.at("min_conjugator_length").get<clf::Int>() == 1);
    CliResult none = dispatch({"conj-search", "W:Z2~Z",
                               R"({"base":"1","lamps":[{"at":"0","val":"1"}]})",
                               R"({"base":"1","lamps":[]})", "--cap", "4"});
    CHECK(clf::Json::parse(none.out).at("min_conjugator_length").is_null());
}

TEST_CASE("distortion table") {
    CliResult r = dispatch({"distortion", "S:2,2", "x1", "--nmax", "3"});
    CHECK(r.code == 0);
    // delta(n) <= 2n row by row
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    clf::Int n, d;
    int rows = 0;
    while (in >> n >> d) {
        CHECK(d <= 2 * n);
        ++rows;
    }
    CHECK(rows == 4);

    CliResult csv = dispatch({"distortion", "Zr:2", "(2,0)", "--nmax", "4",
                              "--format", "csv"});
    CHECK(csv.out == "n,delta\n0,0\n1,0\n2,1\n3,1\n4,2\n");
}

TEST_CASE("clf-scan emits the documented CSV") {
    CliResult r = dispatch({"clf-scan", "--family", "random-wreath", "--top", "C:2",
                            "--base", "Z", "--count", "3", "--cap", "5", "--max-word",
                            "1", "--seed", "11"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("family,instance_id,n,u_len,v_len,min_conj_len,bound_L15,"
                      "bound_L17,bound_T18,bound_T210,bound_C211,violation\n",
                      0) == 0);
    CliResult again = dispatch({"clf-scan", "--family", "random-wreath", "--top", "C:2",
                                "--base", "Z", "--count", "3", "--cap", "5",
                                "--max-word", "1", "--seed", "11"});
    CHECK(r.out == again.out); // same seed, same bytes
}

TEST_CASE("emitted literals re-parse to equal values") {
    using namespace clf;
    CliResult r = dispatch({"normalize", "W:Z2~Z",
                            R"({"base":"-2","lamps":[{"at":"-1","val":"1"}]})"});
    CliResult r2 = dispatch({"normalize", "W:Z2~Z", r.out.substr(0, r.out.size() - 1)});
    CHECK(r.out == r2.out);

    CliResult w = dispatch({"normalize", "P3", "(1 3 2)"});
    CliResult w2 = dispatch({"normalize", "P3", w.out.substr(0, w.out.size() - 1)});
    CHECK(w.out == w2.out);
}

TEST_CASE("exit codes") {
    CHECK(dispatch({"no-such-verb"}).code == 2);
    CHECK(dispatch({}).code == 2);
    CHECK(dispatch({"--help"}).code == 0);
    CHECK(dispatch({"normalize", "Zr:2"}).code == 2);            // missing literal
    CHECK(dispatch({"normalize", "Q:9", "x"}).code == 2);        // bad group spec
    CHECK(dispatch({"normalize", "Zr:2", "(1,2,3)"}).code == 2); // bad literal
    CHECK(dispatch({"normalize", "Zr:2", "(x,y)"}).code == 2);   // non-numeric literal
    CHECK(dispatch({"normalize", "Zr:2", "(1,,2)"}).code == 2);  // malformed tuple
    CHECK(dispatch({"conj-check", "W:Z2~Z", "{broken", "{}"}).code == 2); // bad JSON
    CHECK(dispatch({"wordlen", "S:2,2", "x3"}).code == 2);       // letter out of range
    // radius beyond the BFS cap is a resource error, reported as exit 3
    CHECK(dispatch({"conj-search", "S:2,2", "x1", "x2", "--cap", "40"}).code == 3);
}

TEST_CASE("selftest passes and prints one line per suite") {
    CliResult r = dispatch({"selftest"});
    CHECK(r.code == 0);
    CHECK(r.out.find("[PASS] fundamental-formula") != std::string::npos);
    CHECK(r.out.find("[PASS] embedding-equivalence") != std::string::npos);
    CHECK(r.out.find("[PASS] bi-lipschitz") != std::string::npos);
}
