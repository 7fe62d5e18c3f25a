#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gdist/errors.hpp"
#include "gdist/hashing.hpp"
#include "gdist/pipeline.hpp"

using namespace gdist;
using namespace gdist::pipeline;
namespace fs = std::filesystem;

namespace {

Candidate fake(const std::string& ref, std::vector<double> M_t) {
    Candidate c;
    c.ref = ref;
    c.cert.diameter = static_cast<int>(M_t.size());
    for (std::size_t t = 0; t < M_t.size(); ++t) c.cert.table.push_back({static_cast<int>(t + 1), 0.5, M_t[t]});
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("gdist_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config files") {
    auto c = Config::parse("# comment\npipeline.rho = sqrt(t)  # trailing\n\nwreath.m=3\n");
    CHECK(c.get("pipeline.rho", "") == "sqrt(t)");
    CHECK(c.get_int("wreath.m", 0) == 3);
    CHECK(c.get_int("wreath.missing", 7) == 7);
    CHECK(Config::parse(c.snapshot()).values() == c.values());

    CHECK_THROWS_AS(Config::parse("novalue\n"), UsageError);
    CHECK_THROWS_AS(Config::parse("flat = 1\n"), UsageError);
    CHECK_THROWS_AS(Config::parse("a.b = 1\na.b = 2\n"), UsageError);
    CHECK_THROWS_AS(Config::parse("a.b = x\n").get_int("a.b", 0), UsageError);
    CHECK_THROWS_AS(Settings::from_config(Config::parse("pipeline.colour = red\n")), UsageError);
    CHECK_THROWS_AS(Settings::from_config(Config::parse("pipeline.rounds = -1\n")), UsageError);
    CHECK_THROWS_AS(Settings::from_config(Config::parse("pipeline.family = 4:1\n")), UsageError);
}

TEST_CASE("settings round-trip through the snapshot") {
    auto s = Settings::from_config(Config::parse("pipeline.rho = t^0.5\npipeline.family = 3:1, 2:1:paper-large\n"
                                                 "global.seed = 9\nwreath.factors = S3, C2\n"));
    CHECK(s.family.size() == 2);
    CHECK(s.family[1].genset == GenSet::paper_large);
    CHECK(s.family[1].ref() == "sl3_p2_l1_paper_large");
    CHECK(s.seed == 9);
    auto again = Settings::from_config(Config::parse(s.to_config().snapshot()));
    CHECK(again.to_config().snapshot() == s.to_config().snapshot());
    CHECK_THROWS_AS(toy_factor("Q8"), UsageError);
    CHECK(toy_factor("V4").generator_count() == 2);
}

TEST_CASE("least integer exceeding a threshold") {
    auto rho = parse_rho("log(1+t)");
    for (double thr : {0.5, 2.0, 3.3, 7.0}) {
        double oracle = 1;
        while (!(std::log1p(oracle) > thr)) ++oracle;
        CHECK(least_exceeding(rho, thr, 1, 1e6) == oracle);
    }
    CHECK(least_exceeding(rho, 2.0, 10, 1e6) == 10);
    CHECK_FALSE(least_exceeding(rho, 40.0, 1, 1e15));
    CHECK_FALSE(least_exceeding(rho, 0.0, 20, 10));
}

TEST_CASE("selection ledger") {
    const std::vector<Candidate> family = {fake("A", {1, 1.5, 3}), fake("B", {1, 1, 1, 1.5, 2, 5}),
                                           fake("C", {1, 1, 1, 1, 1, 1.2, 1.4, 1.6, 1.8, 2, 8, 20})};
    Constants c;
    c.K = 1;
    c.L = 1.5;
    c.L_prime = 16;
    const std::vector<LampRecord> lamps = {{1.25, 2, 3}, {1.125, 2, 4}};

    SUBCASE("two complete rounds") {
        auto rho = parse_rho("t");
        auto L = select_indices(family, 2.0, rho, 2, c, lamps, 1e6);
        REQUIRE(L.complete);
        REQUIRE(L.rows.size() == 2);
        CHECK(L.rows[0].t == 4);  // least t with t > 1.5 * 2
        CHECK(L.rows[0].s == 2);  // A is too small
        CHECK(L.rows[1].t == 5);
        CHECK(L.rows[1].s == 3);
        CHECK(L.rows[0].track == "S");
        CHECK(L.rows[1].track == "S'");
        CHECK_FALSE(L.rows[0].chain_L_M);
        CHECK(*L.rows[1].chain_L_M < *L.rows[1].chain_rho_prev);
        for (const auto& r : L.rows) {
            CHECK(r.verified);
            CHECK(r.rho_t > r.L_next_M);
            CHECK(r.far_pair_bound <= r.M);
        }
        CHECK(L.rows[0].lamp->n == 3);

        auto j = ledger_json(L);
        CHECK(j["S"] == nlohmann::json::array({2}));
        CHECK(j["S_prime"] == nlohmann::json::array({3}));
        CHECK(ledger_json(ledger_from_json(j)).dump(2) == j.dump(2));
    }
    SUBCASE("fast rho exhausts the family") {
        auto L = select_indices(family, 2.0, parse_rho("1000000*t"), 4, c, lamps, 1e6);
        CHECK_FALSE(L.complete);
        REQUIRE(L.rows.size() == 3);
        CHECK(L.rows[0].t == 1);
        CHECK(L.rows[0].s == 1);
        CHECK(L.limiting["constraint"] == "s(i)");
        CHECK(L.limiting["round"] == 4);
        auto first = select_indices({fake("X", {9, 9, 9})}, 2.0, parse_rho("t"), 1, c, lamps, 1e6);
        CHECK(first.rows.empty());
        CHECK(first.limiting["constraint"] == "s(i)");
        CHECK(first.limiting["rejected"].size() == 1);
    }
    SUBCASE("bounded rho never clears the threshold") {
        auto L = select_indices(family, 2.0, parse_rho("min(t, 2)"), 2, c, lamps, 1e15);
        CHECK_FALSE(L.complete);
        CHECK(L.rows.empty());
        CHECK(L.limiting["constraint"] == "t_i");
    }
    SUBCASE("zero rounds") {
        auto L = select_indices(family, 2.0, parse_rho("t"), 0, c, lamps, 1e6);
        CHECK(L.complete);
        CHECK(L.rows.empty());
    }
}

TEST_CASE("empty bundle for zero rounds") {
    Settings s;
    s.rounds = 0;
    auto r = run_pipeline(s);
    CHECK(r.exit_code == 0);
    CHECK(r.candidates.empty());
    const auto out = scratch("empty");
    emit_report(r, s, out);
    for (const char* f : {"config.snapshot", "ledger.json", "manifest.json"}) CHECK(fs::exists(out / f));
    CHECK(fs::is_directory(out / "certificates"));
    auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["files"].size() == 2);
    for (const auto& f : manifest["files"])
        CHECK(f["sha256"] == sha256_hex(slurp(out / f["path"].get<std::string>())));
    auto ledger = nlohmann::json::parse(slurp(out / "ledger.json"));
    CHECK(ledger["rows"].empty());
    CHECK(ledger_json(ledger_from_json(ledger)).dump(2) + "\n" == slurp(out / "ledger.json"));
    fs::remove_all(out);
}

TEST_CASE("small run is partial and byte-reproducible") {
    Settings s;
    s.family = parse_family("2:1");
    s.rounds = 1;
    s.optimizer_iterations = 30;
    s.measure_radius = 4;
    auto a = run_pipeline(s);
    CHECK(a.exit_code == 2);
    CHECK_FALSE(a.ledger.complete);
    REQUIRE(a.candidates.size() == 1);
    CHECK(a.candidates[0].J == 4);
    CHECK(a.ledger.comparisons.size() == 1);
    CHECK(a.ledger.comparisons[0]["poincare_witnesses"].size() == 6);

    const auto one = scratch("run1"), two = scratch("run2");
    emit_report(a, s, one);
    emit_report(run_pipeline(s), s, two);
    for (const auto& entry : fs::recursive_directory_iterator(one)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), one);
        CAPTURE(rel.string());
        CHECK(slurp(entry.path()) == slurp(two / rel));
    }
    CHECK(fs::exists(one / "profiles" / "sl3_p2_l1_small.csv"));
    CHECK(fs::exists(one / "certificates" / "sl3_p2_l1_small.json"));
    fs::remove_all(one);
    fs::remove_all(two);
}
