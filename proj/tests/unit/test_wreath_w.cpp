#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

#include "gdist/errors.hpp"
#include "gdist/wreath_w.hpp"

using namespace gdist;
using namespace gdist::wreath;

namespace {

PlacementPlan two_c2_plan(int m) {
    auto plan = configure_plan({make_factor("C2a", cyclic_group(2)), make_factor("C2b", cyclic_group(2))});
    place(plan, {m, m});
    return plan;
}

PlacementPlan s3_plan(int m) {
    auto plan = configure_plan({make_factor("S3", symmetric_group(3))});
    place(plan, {m, m});
    return plan;
}

WElement random_element(const WreathW& w, const PlacementPlan& plan, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> letter(0, 4), len(0, 8);
    std::string word;
    for (int i = len(rng); i > 0; --i) word += "abcdf"[letter(rng)];
    return w.evaluate(word, lamp_function(plan, plan.n.size()));
}

// Independent distance oracle on the Schreier graph.
int schreier_distance(const grig::Ray& x, const grig::Ray& y, int limit) {
    std::set<grig::Ray> seen{x};
    std::vector<grig::Ray> frontier{x};
    if (x == y) return 0;
    for (int d = 1; d <= limit; ++d) {
        std::vector<grig::Ray> next;
        for (const auto& r : frontier)
            for (char c : std::string("abcd")) {
                auto z = grig::act(c, r);
                if (z == y) return d;
                if (seen.insert(z).second) next.push_back(z);
            }
        frontier.swap(next);
    }
    return limit + 1;
}

}  // namespace

TEST_CASE("wreath law basics") {
    auto plan = two_c2_plan(2);
    auto w = plan_wreath(plan);
    std::mt19937_64 rng(5);
    auto u = random_element(w, plan, rng);
    CHECK(w_op(w, WOp::mul, w.identity(), &u) == u);
    CHECK(w.multiply(u, w.invert(u)) == w.identity());

    auto h = plan.b[0];
    auto delta = w.delta(grig::ray_x(0), h);
    CHECK(w.multiply(delta, delta) == w.identity());

    // f^g moves the support by g
    auto f = lamp_function(plan, 1);
    for (const std::string g : {"a", "ab", "bada", "cabadac"}) {
        auto conj = w.conjugate(f, w.from_word(g));
        CHECK(conj.g == "1");
        std::set<grig::Ray> expected;
        for (const auto& [x, val] : f.fun) expected.insert(grig::act(g, x));
        std::set<grig::Ray> got;
        for (const auto& [x, val] : conj.fun) got.insert(x);
        CHECK(got == expected);
        for (const auto& [x, val] : f.fun) CHECK(conj.fun.at(grig::act(g, x)) == val);
    }

    CHECK(w.decode(w.encode(u)) == u);
    CHECK_THROWS_AS(w_op(w, WOp::mul, u, nullptr), UsageError);
}

TEST_CASE("wreath law associativity on random triples") {
    auto plan = s3_plan(2);
    auto w = plan_wreath(plan);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 1000; ++t) {
        auto x = random_element(w, plan, rng), y = random_element(w, plan, rng), z = random_element(w, plan, rng);
        REQUIRE(w.multiply(w.multiply(x, y), z) == w.multiply(x, w.multiply(y, z)));
    }
}

TEST_CASE("plan configuration") {
    auto klein = direct_product({cyclic_group(2), cyclic_group(2)});
    auto p1 = configure_plan({make_factor("V4", klein)});
    CHECK(p1.N == 2);
    auto p2 = configure_plan({make_factor("S3", symmetric_group(3))});
    CHECK(p2.N == 6);
    for (const auto& b : p2.b) CHECK(p2.lamps.power(b, 6) == p2.lamps.identity());
    for (const auto& b : p2.b) CHECK(p2.lamps.power(b, 3) != p2.lamps.identity());
    for (const auto& b : p2.b) CHECK(p2.lamps.power(b, 2) != p2.lamps.identity());

    auto p3 = configure_plan({make_factor("S3", symmetric_group(3)), make_factor("V4", klein)});
    std::set<std::pair<std::size_t, std::size_t>> seen(p3.owner.begin(), p3.owner.end());
    CHECK(seen.size() == 4);
    CHECK(p3.offset(1) == 2);
    CHECK_THROWS_AS(configure_plan({}), UsageError);
}

TEST_CASE("choosing n") {
    auto plan = configure_plan({make_factor("S3", symmetric_group(3)), make_factor("C2", cyclic_group(2))});
    auto c0 = choose_n(plan, 0, 0);
    REQUIRE(c0);
    CHECK(c0->n == 0);

    auto c2 = choose_n(plan, 0, 2);
    REQUIRE(c2);
    MESSAGE("n(1) at m = 2: " << c2->n << ", nearest other point at distance " << c2->nearest_other);
    // oracle: distance and ball conditions at the chosen index, failure just below it
    auto conditions = [&](int n, int m) {
        for (int k = n; k <= plan.index_cap; ++k)
            for (int j = 0; j <= plan.index_cap + 2; ++j)
                if (j != k && schreier_distance(grig::ray_x(j), grig::ray_x(k), m) < m) return false;
        for (int j = n + 1; j <= plan.index_cap; ++j)
            if (!labeled_isomorphic(grig::schreier_ball(grig::ray_x(n), m), grig::schreier_ball(grig::ray_x(j), m)))
                return false;
        return true;
    };
    CHECK(conditions(c2->n, 2));
    for (int n = 0; n < c2->n; ++n) CHECK_FALSE(conditions(n, 2));
    CHECK(c2->nearest_other >= 2);

    int prev = -1;
    for (int m = 0; m <= 5; ++m) {
        auto c = choose_n(plan, 0, m);
        REQUIRE(c);
        CHECK(c->n >= prev);
        prev = c->n;
    }

    place(plan, {1, 2, 2});
    auto pos = plan.positions();
    CHECK(std::is_sorted(pos.begin(), pos.end()));
    CHECK(std::adjacent_find(pos.begin(), pos.end()) == pos.end());
    CHECK_THROWS_AS(place(plan, {2, 1}), UsageError);
}

TEST_CASE("ball coincidence with a negative control") {
    for (int m : {2, 3}) {
        CAPTURE(m);
        auto plan = two_c2_plan(m);
        MESSAGE("m = " << m << ": n = " << plan.n[0].n << ", " << plan.n[1].n);
        CHECK(verify_ball_coincidence(plan, 0, 0).holds);
        for (int r = 1; r <= m; ++r) {
            auto c = verify_ball_coincidence(plan, 0, r);
            CHECK(c.holds);
            CHECK(c.ball_size_left == c.ball_size_right);
            CHECK(c.mapping.size() == c.ball_size_left);
        }
    }

    // adversarial: adjacent points x_0, x_1 violate the distance condition
    auto bad = two_c2_plan(2);
    bad.n[0].n = 0;
    bad.n[1].n = 1;
    bool failed = false;
    for (int r = 1; r <= 3 && !failed; ++r) failed = !verify_ball_coincidence(bad, 0, r).holds;
    CHECK(failed);
}

TEST_CASE("commutator witnesses") {
    auto c2 = two_c2_plan(2);
    auto wc = commutator_witness(c2, 0, 1, grig::ray_x(0));
    CHECK(wc.holds);
    CHECK(wc.value == plan_wreath(c2).identity());

    auto s3 = s3_plan(2);
    auto ws = commutator_witness(s3, 0, 1, grig::ray_x(0));
    CHECK(ws.holds);
    CHECK(ws.value.g == "1");
    REQUIRE(ws.value.fun.size() == 1);
    CHECK(ws.value.fun.begin()->first == grig::ray_x(0));
    CHECK(ws.value.fun.begin()->second == s3.lamps.commutator(s3.b[0], s3.b[1]).code);
    CHECK(ws.expected != s3.lamps.identity());

    auto other = commutator_witness(s3, 1, 0, grig::ray_x(3));
    CHECK(other.holds);
}

TEST_CASE("Psi imbedding") {
    auto plan = s3_plan(2);
    auto psi = psi_rectifiers(plan, 0);
    MESSAGE("rectifiers: " << psi.g[0] << " / L' = " << psi.L_prime);
    auto w = plan_wreath(plan);
    const auto& s3 = plan.factors[0].group;

    auto id = psi_imbed(plan, psi, s3.identity());
    CHECK(id.value == w.identity());
    CHECK(id.perfect_norm == 0);

    auto c = s3.commutator(s3.generators()[0], s3.generators()[1]);
    auto img = psi_imbed(plan, psi, c);
    CHECK(img.perfect_norm <= 4);
    CHECK(static_cast<int>(img.w_word.size()) <= 4 * (2 * psi.L_prime + 1));

    // multiplicativity on A3
    const auto derived = derived_subgroup(s3, plan.factors[0].graph, 100);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, derived.size() - 1);
    for (int t = 0; t < 100; ++t) {
        Element h{derived.elements[pick(rng)]}, k{derived.elements[pick(rng)]};
        auto lhs = w.multiply(psi_imbed(plan, psi, h).value, psi_imbed(plan, psi, k).value);
        REQUIRE(lhs == psi_imbed(plan, psi, s3.multiply(h, k)).value);
    }
}

TEST_CASE("bi-Lipschitz measurement") {
    auto plan = s3_plan(2);
    auto psi = psi_rectifiers(plan, 0);
    auto meas = measure_bilipschitz(plan, psi, 8, 2'000'000);
    MESSAGE("W ball radius " << meas.radius << std::string(meas.partial ? " (partial)" : ""));
    REQUIRE(meas.rows.size() == 2);
    CHECK(meas.violations == 0);
    CHECK(meas.undetermined == 0);
    for (const auto& r : meas.rows) {
        MESSAGE(r.element << ": perfect " << r.perfect_norm << ", W in [" << r.w_lower << ", " << r.w_upper << "]");
        CHECK(r.perfect_norm <= r.w_lower);
        CHECK(r.w_upper <= (2 * psi.L_prime + 1) * r.perfect_norm);
    }
    REQUIRE(meas.K);
    CHECK(*meas.K <= 1.0);
    CHECK(*meas.L <= 2 * psi.L_prime + 1);

    // trivial derived subgroup: nothing to measure
    auto c2 = two_c2_plan(2);
    auto m2 = measure_bilipschitz(c2, psi_rectifiers(c2, 0), 2);
    CHECK(m2.rows.empty());
    CHECK_FALSE(m2.K);

    auto j = plan_json(plan, {psi}, {meas});
    CHECK(j["N"] == 6);
    CHECK(j["lamps"].size() == 2);
    CHECK(j["psi"][0]["L_prime"] == psi.L_prime);
}

TEST_CASE("growth and m") {
    auto plan = two_c2_plan(2);
    auto g1 = growth_and_m(plan, 1, 100.0, 4);
    REQUIRE(g1.m);
    CHECK(*g1.m == 1);
    CHECK(g1.growth[0] == 1);

    auto g2 = growth_and_m(plan, 1, 2.0, 9, 500'000);
    MESSAGE("growth of W_1 with eps = 2:");
    for (std::size_t r = 0; r < g2.growth.size(); ++r) MESSAGE("  v(" << r << ") = " << g2.growth[r]);
    for (std::size_t r = 1; r < g2.growth.size(); ++r) CHECK(g2.growth[r] >= g2.growth[r - 1]);

    // eps = 3: least m with v(m) <= 3^m, read off the same growth prefix
    auto g3 = growth_and_m(plan, 1, 3.0, 9, 500'000);
    REQUIRE(g3.m);
    for (int r = 1; r < *g3.m; ++r) CHECK(static_cast<double>(g2.growth[static_cast<std::size_t>(r)]) > std::pow(3.0, r));
    CHECK(static_cast<double>(g2.growth[static_cast<std::size_t>(*g3.m)]) <= std::pow(3.0, *g3.m));
    MESSAGE("m for eps = 3: " << *g3.m);

    // f trivial: the Grigorchuk group itself (with f the identity generator)
    auto g0 = growth_and_m(plan, -1, 100.0, 3);
    CHECK(g0.growth == std::vector<std::uint64_t>{1, 5});
}
