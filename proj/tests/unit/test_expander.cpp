#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gdist/errors.hpp"
#include "gdist/expander.hpp"

using namespace gdist;

namespace {

CayleyGraph complete_graph(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return graph_from_edges(n, e);
}

CayleyGraph cycle_graph(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return graph_from_edges(n, e);
}

// Oracle: |GL3(F_q)| / (q - 1) by counting ordered bases.
std::uint64_t order_by_bases(std::uint64_t q) {
    std::uint64_t q3 = q * q * q;
    return (q3 - 1) * (q3 - q) * (q3 - q * q) / (q - 1);
}

}  // namespace

TEST_CASE("SL3 orders match the order formula") {
    CHECK(sl3_order(2, 1) == 168);
    CHECK(sl3_order(2, 2) == 43008);
    CHECK(sl3_order(3, 1) == 5616);
    CHECK(build_sl3(2, 1, GenSet::small).graph.n == order_by_bases(2));
    CHECK(build_sl3(3, 1, GenSet::small).graph.n == order_by_bases(3));
    CHECK(build_sl3(2, 2, GenSet::small).graph.n == order_by_bases(2) * 256);
    CHECK_THROWS_AS(build_sl3(2, 3, GenSet::small), BudgetExceeded);
    CHECK_THROWS_AS(sl3_order(4, 1), UsageError);
}

TEST_CASE("quotient compatibility of the level-2 generators") {
    auto level2 = sl3_group(2, 2, GenSet::small);
    std::vector<std::pair<std::string, Matrix3>> truncated;
    for (std::size_t i = 0; i < level2.generator_count(); ++i)
        truncated.emplace_back(level2.generator_names()[i],
                               Matrix3::decode(2, 2, level2.generators()[i].code).truncate(1));
    auto image = bfs_closure(matrix_group(2, 1, truncated, "truncated"), 1000);
    auto level1 = bfs_closure(sl3_group(2, 1, GenSet::small), 1000);
    REQUIRE(image.n == level1.n);
    std::set<std::string> a, b;
    for (std::uint64_t v = 0; v < image.n; ++v) {
        a.insert(image.element(v));
        b.insert(level1.element(v));
    }
    CHECK(a == b);
}

TEST_CASE("perfectness") {
    auto s1 = build_sl3(2, 1, GenSet::small);
    CHECK(check_perfect(s1.group, s1.graph, 1000));
    auto c6 = cyclic_group(6);
    CHECK_FALSE(check_perfect(c6, bfs_closure(c6, 10), 10));
    auto s2 = build_sl3(2, 2, GenSet::small);
    CHECK(check_perfect(s2.group, s2.graph, 50'000));
}

TEST_CASE("Steinberg identities") {
    auto zero = RingElement(2, 2);
    CHECK(steinberg_holds(zero, zero));
    CHECK(elementary_matrix(1, 2, zero) == Matrix3::identity(2, 2));

    const std::int64_t t[] = {0, 1}, one_plus_t[] = {1, 1};
    auto P = RingElement::from_coeffs(2, 2, t), Q = RingElement::from_coeffs(2, 2, one_plus_t);
    CHECK(steinberg_holds(P, Q));
    // direct evaluation of one configuration: PQ = t + t^2 = t
    CHECK(commutator(elementary_matrix(1, 3, P), elementary_matrix(3, 2, Q)) == elementary_matrix(1, 2, P));

    for (auto [p, level] : {std::pair{2u, 1}, {2u, 2}, {3u, 1}, {3u, 3}}) {
        auto rep = steinberg_check(p, level, 500, 7);
        CHECK(rep.checks == 500 * 12);
        CHECK(rep.configurations == 6);
    }
}

TEST_CASE("certificates on closed-form graphs") {
    for (std::uint64_t n : {5u, 8u}) {
        auto c = certificate(complete_graph(n), 1e-10, 1);
        CHECK(c.lambda1 == doctest::Approx(static_cast<double>(n)).epsilon(1e-9));
        CHECK(c.C == doctest::Approx((n - 1.0) / (2.0 * n)));
        CHECK(c.C < 0.5);
        REQUIRE(c.table.size() == 1);
        CHECK(c.table[0].P_t == doctest::Approx((n - 1.0) / n));
        CHECK(c.lower_bound <= 1.0 + 1e-12);
    }
    auto c4 = certificate(cycle_graph(4), 1e-10, 1);
    CHECK(c4.lambda1 == doctest::Approx(2.0));
    REQUIRE(c4.table.size() == 2);
    CHECK(c4.table[1].P_t == doctest::Approx(0.25));
    CHECK(c4.table[1].M_t == doctest::Approx(2.0));
    CHECK(c4.lower_bound >= 1.0 - 1e-12);
    CHECK(c4.lower_bound <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("SL3 certificates") {
    auto s1 = build_sl3(2, 1, GenSet::small);
    auto c1 = certificate(s1, 1e-9, 1);
    CHECK(c1.n == 168);
    CHECK(c1.d_reg == 12);
    CHECK(c1.lambda1 > 0);
    CHECK(c1.residual <= 1e-6);
    CHECK(static_cast<int>(c1.table.size()) == c1.diameter);
    for (std::size_t i = 1; i < c1.table.size(); ++i) {
        CHECK(c1.table[i].P_t <= c1.table[i - 1].P_t);
        CHECK(c1.table[i].M_t >= c1.table[i - 1].M_t);
    }
    for (const auto& row : c1.table)
        if (row.P_t > 0) CHECK(row.M_t == doctest::Approx(std::sqrt(c1.d_reg / (c1.lambda1 * row.P_t))));
    MESSAGE("SL3(F2): lambda1 = " << c1.lambda1 << ", diameter = " << c1.diameter << ", bound = " << c1.lower_bound);

    auto back = certificate_from_json(certificate_json(c1));
    CHECK(certificate_json(back) == certificate_json(c1));

    auto large = build_sl3(2, 1, GenSet::paper_large);
    CHECK(large.graph.n == 168);
    CHECK(diameter(large.graph) <= 3);

    const double M = family_constant({c1});
    CHECK(M >= c1.M_at(c1.diameter / 2.0));
    CHECK(M > 0);
}
