#pragma once

#include <clf/clf.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace clf::cli {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

namespace detail {

struct WreathSpec {
    GroupDescriptor top;  // A
    GroupDescriptor base; // B
};

/// "W:<A>~<B>" with each leg a group spec (aliases allowed).
inline std::optional<WreathSpec> parse_wreath_spec(std::string_view spec) {
    if (spec.substr(0, 2) != "W:") return std::nullopt;
    auto rest = spec.substr(2);
    auto sep = rest.find('~');
    if (sep == std::string_view::npos)
        throw input_error("wreath spec: expected W:<A>~<B>");
    return WreathSpec{GroupDescriptor::parse(rest.substr(0, sep)),
                      GroupDescriptor::parse(rest.substr(sep + 1))};
}

inline Json certificate_json(const ConjugacyCertificate& cert, const GroupOracle& B,
                             const GroupOracle& A) {
    Json j;
    j["conjugator"] = wreath_to_json(cert.conjugator);
    j["z"] = element_to_json(B, cert.z);
    Json pis = Json::array();
    for (const auto& entry : cert.pi_table) {
        Json row;
        row["rep"] = element_to_json(B, entry.rep);
        row["pi_f"] = element_to_json(A, entry.pi_f);
        row["pi_g"] = element_to_json(A, entry.pi_g);
        pis.push_back(std::move(row));
    }
    j["pi"] = std::move(pis);
    if (!cert.alphas.empty()) {
        Json alphas = Json::array();
        for (const auto& [rep, alpha] : cert.alphas) {
            Json row;
            row["rep"] = element_to_json(B, rep);
            row["alpha"] = element_to_json(A, alpha);
            alphas.push_back(std::move(row));
        }
        j["alphas"] = std::move(alphas);
    }
    j["verified"] = cert.verified;
    return j;
}

inline Json verdict_field(Verdict v) {
    if (v == Verdict::Yes) return Json(true);
    if (v == Verdict::No) return Json(false);
    return Json("inconclusive");
}

inline std::optional<Int> wreath_bound(const WreathConjugacyResult& r,
                                       const GroupOracle& A, const GroupOracle& B,
                                       const GroupElement& b) {
    try {
        BoundParams p;
        p.n = r.n;
        p.P = std::max<Int>(2 * r.n, r.n + clf_upper_bound_for(B, r.n));
        p.clf_A = clf_upper_bound_for(A, r.n);
        auto order = B.element_order(b);
        if (order)
            p.N = *order;
        else
            p.delta_P = measure_distortion(B, b, *p.P).delta(*p.P);
        return bound_evaluate("T18", p);
    } catch (const resource_error&) {
        return std::nullopt;
    }
}

struct Options {
    std::string group;
    std::string arg1;
    std::string arg2;
    int nmax = 4;
    int cap = 8;
    std::string format = "text";
    // scan flags
    std::string family = "random-wreath";
    std::string top = "C:2";
    std::string base = "Z";
    std::string solvable = "S:2,2";
    int count = 10;
    int max_word = 2;
    std::uint64_t seed = 1;
    std::string out_file;
};

inline void run_normalize(const Options& opt, std::ostream& out) {
    if (auto w = parse_wreath_spec(opt.group)) {
        GroupOracle A(w->top), B(w->base);
        WreathElement u = wreath_from_json(B, A, Json::parse(opt.arg1));
        out << wreath_to_json(u).dump() << "\n";
        return;
    }
    GroupDescriptor desc = GroupDescriptor::parse(opt.group);
    GroupOracle G(desc);
    GroupElement g = G.parse(opt.arg1);
    if (desc.kind == GroupKind::FreeSolvable)
        out << nf_to_json(g.nf()).dump() << "\n";
    else
        out << G.print(g) << "\n";
}

inline void run_mul(const Options& opt, std::ostream& out) {
    if (auto w = parse_wreath_spec(opt.group)) {
        GroupOracle A(w->top), B(w->base);
        WreathElement u = wreath_from_json(B, A, Json::parse(opt.arg1));
        WreathElement v = wreath_from_json(B, A, Json::parse(opt.arg2));
        out << wreath_to_json(wreath_mul(u, v)).dump() << "\n";
        return;
    }
    GroupOracle G(GroupDescriptor::parse(opt.group));
    GroupElement p = G.mul(G.parse(opt.arg1), G.parse(opt.arg2));
    out << G.print(p) << "\n";
}

inline void run_wordlen(const Options& opt, std::ostream& out) {
    if (auto w = parse_wreath_spec(opt.group)) {
        GroupOracle A(w->top), B(w->base);
        WreathElement u = wreath_from_json(B, A, Json::parse(opt.arg1));
        out << wreath_word_length(u) << "\n";
        return;
    }
    GroupOracle G(GroupDescriptor::parse(opt.group));
    out << G.word_length(G.parse(opt.arg1)) << "\n";
}

inline void run_conj_check(const Options& opt, std::ostream& out) {
    Json j;
    if (auto w = parse_wreath_spec(opt.group)) {
        GroupOracle A(w->top), B(w->base);
        WreathElement u = wreath_from_json(B, A, Json::parse(opt.arg1));
        WreathElement v = wreath_from_json(B, A, Json::parse(opt.arg2));
        WreathConjugacyResult r = wreath_conjugacy(u, v);
        j["conjugate"] = verdict_field(r.verdict);
        if (r.certificate) {
            j["certificate"] = certificate_json(*r.certificate, B, A);
            j["z_length"] = B.word_length(r.certificate->z);
        } else {
            j["certificate"] = nullptr;
        }
        j["n"] = r.n;
        auto bound = wreath_bound(r, A, B, u.cursor);
        if (bound)
            j["bound"] = *bound;
        else
            j["bound"] = nullptr;
        if (!r.note.empty()) j["note"] = r.note;
        out << j.dump() << "\n";
        return;
    }
    GroupDescriptor desc = GroupDescriptor::parse(opt.group);
    GroupOracle G(desc);
    GroupElement u = G.parse(opt.arg1);
    GroupElement v = G.parse(opt.arg2);
    if (desc.kind == GroupKind::FreeSolvable && desc.depth >= 2) {
        SolvableConjugacyResult r = solvable_conjugacy(u, v);
        j["conjugate"] = verdict_field(r.verdict);
        if (r.conjugator) {
            Json cert;
            cert["conjugator"] = G.print(*r.conjugator);
            cert["verified"] = true;
            j["certificate"] = std::move(cert);
            j["z_length"] = G.word_length(*r.conjugator);
        } else {
            j["certificate"] = nullptr;
        }
        j["n"] = r.n;
        j["bound"] = r.length_bound;
        if (!r.note.empty()) j["note"] = r.note;
    } else {
        BaseConjugacy bc = base_conjugator(G, u, v);
        j["conjugate"] = verdict_field(bc.verdict);
        if (bc.z) {
            Json cert;
            cert["conjugator"] = G.print(*bc.z);
            cert["verified"] = verify_conjugator(u, v, *bc.z);
            j["certificate"] = std::move(cert);
            j["z_length"] = G.word_length(*bc.z);
        } else {
            j["certificate"] = nullptr;
        }
    }
    out << j.dump() << "\n";
}

inline void run_conj_search(const Options& opt, std::ostream& out) {
    Json j;
    j["cap"] = opt.cap;
    std::optional<Int> len;
    if (auto w = parse_wreath_spec(opt.group)) {
        GroupOracle A(w->top), B(w->base);
        WreathElement u = wreath_from_json(B, A, Json::parse(opt.arg1));
        WreathElement v = wreath_from_json(B, A, Json::parse(opt.arg2));
        len = min_conjugator_length(u, v, opt.cap).length;
    } else {
        GroupOracle G(GroupDescriptor::parse(opt.group));
        len = min_conjugator_length(G.parse(opt.arg1),
                                    G.parse(opt.arg2), opt.cap).length;
    }
    if (len)
        j["min_conjugator_length"] = *len;
    else
        j["min_conjugator_length"] = nullptr;
    out << j.dump() << "\n";
}

inline void run_distortion(const Options& opt, std::ostream& out) {
    GroupOracle G(GroupDescriptor::parse(opt.group));
    GroupElement b = G.parse(opt.arg1);
    DistortionProfile profile = measure_distortion(G, b, opt.nmax);
    if (opt.format == "json") {
        Json j;
        j["group"] = G.descriptor().str();
        j["b"] = G.print(b);
        j["samples"] = Json::array();
        for (const auto& [n, d] : profile.samples) j["samples"].push_back({n, d});
        out << j.dump() << "\n";
    } else if (opt.format == "csv") {
        out << "n,delta\n";
        for (const auto& [n, d] : profile.samples) out << n << ',' << d << "\n";
    } else {
        out << "n\tdelta(n)\n";
        for (const auto& [n, d] : profile.samples) out << n << '\t' << d << "\n";
    }
}

inline void run_scan(const Options& opt, std::ostream& out) {
    ScanConfig cfg;
    cfg.family = opt.family;
    cfg.top = GroupDescriptor::parse(opt.top);
    cfg.base = GroupDescriptor::parse(opt.base);
    cfg.solvable = GroupDescriptor::parse(opt.solvable);
    cfg.count = opt.count;
    cfg.n_max = opt.nmax;
    cfg.conj_cap = opt.cap;
    cfg.max_word = opt.max_word;
    cfg.seed = opt.seed;
    std::string csv = scan_to_csv(clf_scan(cfg));
    if (!opt.out_file.empty()) {
        std::ofstream f(opt.out_file);
        if (!f) throw input_error("cannot open output file " + opt.out_file);
        f << csv;
        out << "wrote " << opt.out_file << "\n";
    } else {
        out << csv;
    }
}

inline int run_selftest(std::ostream& out) {
    struct Suite {
        const char* name;
        bool ok;
        std::string msg;
    };
    std::vector<Suite> suites;
    {
        std::string msg;
        bool ok = selfcheck::fundamental_formula(0x5EED0001ull, 1000, 3, 12, &msg);
        suites.push_back({"fundamental-formula", ok, msg});
    }
    {
        std::string msg;
        bool ok = selfcheck::embedding_equivalence(0x5EED0002ull, 500, 2, 1, 10, &msg);
        suites.push_back({"embedding-equivalence", ok, msg});
    }
    {
        std::string msg;
        bool ok = selfcheck::bilipschitz(2, 2, 4, &msg);
        suites.push_back({"bi-lipschitz", ok, msg});
    }
    int failures = 0;
    for (const auto& s : suites) {
        out << (s.ok ? "[PASS] " : "[FAIL] ") << s.name;
        if (!s.ok) {
            out << " — " << s.msg;
            ++failures;
        }
        out << "\n";
    }
    return failures == 0 ? 0 : 1;
}

} // namespace detail

/// Parse and run one invocation. Exit codes: 0 success (mathematical
/// verdicts are data, not failures), 1 selftest failure, 2 input errors,
/// 3 resource-cap errors.
inline CliResult dispatch(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    detail::Options opt;
    int selftest_code = 0;

    CLI::App app{"exact word metrics, embeddings and conjugacy for wreath products "
                 "and free solvable groups"};
    app.require_subcommand(1);

    const char* group_help =
        "group spec: Zr:<r> (free abelian; alias Z, Z^<r>), C:<q> (cyclic; alias "
        "Z<q>), P3 (symmetric group on 3 points, generators (1 2) and (2 3)), "
        "S:<r>,<d> (free solvable), W:<A>~<B> (wreath product)";
    const char* literal_help =
        "element literals: words \"x1 X2\" (X = inverse, \"e\" = identity) for "
        "S:<r>,<d>; integer tuples \"(1,0)\" (bare integer when rank 1) for Zr:<r>; "
        "residues for C:<q>; cycles \"(1 2)\", \"(1 2 3)\", \"e\" for P3; "
        "{\"base\":...,\"lamps\":[{\"at\":...,\"val\":...}]} JSON for W:<A>~<B>";

    auto* normalize = app.add_subcommand("normalize", "canonical form of an element");
    normalize->add_option("group", opt.group, group_help)->required();
    normalize->add_option("element", opt.arg1, literal_help)->required();
    normalize->callback([&] { detail::run_normalize(opt, out); });

    auto* mul = app.add_subcommand("mul", "product of two elements");
    mul->add_option("group", opt.group, group_help)->required();
    mul->add_option("u", opt.arg1, literal_help)->required();
    mul->add_option("v", opt.arg2, literal_help)->required();
    mul->callback([&] { detail::run_mul(opt, out); });

    auto* wordlen = app.add_subcommand("wordlen", "exact word length of an element");
    wordlen->add_option("group", opt.group, group_help)->required();
    wordlen->add_option("element", opt.arg1, literal_help)->required();
    wordlen->callback([&] { detail::run_wordlen(opt, out); });

    auto* cc = app.add_subcommand("conj-check",
                                  "decide conjugacy; emits a JSON verdict with a "
                                  "multiplication-verified certificate");
    cc->add_option("group", opt.group, group_help)->required();
    cc->add_option("u", opt.arg1, literal_help)->required();
    cc->add_option("v", opt.arg2, literal_help)->required();
    cc->callback([&] { detail::run_conj_check(opt, out); });

    auto* cs = app.add_subcommand("conj-search",
                                  "exhaustive minimal-conjugator search up to a radius");
    cs->add_option("group", opt.group, group_help)->required();
    cs->add_option("u", opt.arg1, literal_help)->required();
    cs->add_option("v", opt.arg2, literal_help)->required();
    cs->add_option("--cap", opt.cap, "search radius cap")->capture_default_str();
    cs->callback([&] { detail::run_conj_search(opt, out); });

    auto* dist = app.add_subcommand("distortion",
                                    "cyclic subgroup distortion profile of an element");
    dist->add_option("group", opt.group, group_help)->required();
    dist->add_option("b", opt.arg1, literal_help)->required();
    dist->add_option("--nmax", opt.nmax, "largest ambient length")->capture_default_str();
    dist->add_option("--format", opt.format, "text | json | csv")->capture_default_str();
    dist->callback([&] { detail::run_distortion(opt, out); });

    auto* scan = app.add_subcommand("clf-scan",
                                    "scan instances, record minimal conjugator lengths "
                                    "against the closed-form bounds, emit CSV");
    scan->add_option("--family", opt.family,
                     "random-wreath | random-solvable | L111 | T110 | T112 | P19")
        ->capture_default_str();
    scan->add_option("--top", opt.top, "top group A")->capture_default_str();
    scan->add_option("--base", opt.base, "base group B")->capture_default_str();
    scan->add_option("--solvable", opt.solvable, "group for random-solvable")
        ->capture_default_str();
    scan->add_option("--count", opt.count, "instances")->capture_default_str();
    scan->add_option("--nmax", opt.nmax, "family index range")->capture_default_str();
    scan->add_option("--cap", opt.cap, "min-conjugator search radius")
        ->capture_default_str();
    scan->add_option("--max-word", opt.max_word, "sampling radius")->capture_default_str();
    scan->add_option("--seed", opt.seed, "PRNG seed (xoshiro256** via splitmix64)")
        ->capture_default_str();
    scan->add_option("--out", opt.out_file, "CSV output file (default stdout)");
    scan->callback([&] { detail::run_scan(opt, out); });

    auto* selftest = app.add_subcommand(
        "selftest", "run the fundamental-formula, embedding-equivalence and "
                    "bi-Lipschitz suites");
    selftest->callback([&] { selftest_code = detail::run_selftest(out); });

    std::vector<const char*> argv;
    argv.push_back("clf");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return {code == 0 ? 0 : 2, out.str(), err.str()};
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return {2, out.str(), err.str()};
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << "\n";
        return {3, out.str(), err.str()};
    } catch (const Json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return {2, out.str(), err.str()};
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return {2, out.str(), err.str()};
    }
    return {selftest_code, out.str(), err.str()};
}

} // namespace clf::cli
