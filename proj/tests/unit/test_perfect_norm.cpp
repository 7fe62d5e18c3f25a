#include <doctest.h>

#include <map>
#include <sstream>

#include "gdist/errors.hpp"
#include "gdist/perfect_norm.hpp"

using namespace gdist;

namespace {

GroupHandle sl3_f2() {
    std::vector<std::pair<std::string, Matrix3>> gens;
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            if (r != c)
                gens.emplace_back("X" + std::to_string(r) + std::to_string(c),
                                  elementary_matrix(r, c, RingElement::constant(2, 1, 1)));
    return matrix_group(2, 1, gens, "SL3(F2)");
}

// Oracle: enumerate every word of length <= max_len and keep the shortest
// balanced representative of each element.
std::map<std::string, int> naive_perfect_norms(const GroupHandle& g, int max_len) {
    std::map<std::string, int> best;
    const int letters = static_cast<int>(2 * g.generator_count());
    std::vector<int> word;
    for (int len = 0; len <= max_len; ++len) {
        word.assign(static_cast<std::size_t>(len), 0);
        while (true) {
            auto e = exponent_vector(word, g.generator_count());
            if (std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) {
                auto code = g.evaluate(word).code;
                if (!best.count(code)) best[code] = len;
            }
            int pos = len - 1;
            while (pos >= 0 && ++word[static_cast<std::size_t>(pos)] == letters) word[static_cast<std::size_t>(pos--)] = 0;
            if (pos < 0) break;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("exponent vectors") {
    CHECK(exponent_vector(std::vector<int>{}, 2) == std::vector<int>{0, 0});
    // s=gen 0, t=gen 1: [s, t, s^-1, t^-1]
    CHECK(exponent_vector(std::vector<int>{0, 2, 1, 3}, 2) == std::vector<int>{0, 0});
    CHECK(exponent_vector(std::vector<int>{0, 0, 3}, 2) == std::vector<int>{2, -1});
    CHECK_THROWS_AS(exponent_vector(std::vector<int>{4}, 2), UsageError);
}

TEST_CASE("derived subgroups") {
    auto c6 = cyclic_group(6);
    auto d = derived_subgroup(c6, bfs_closure(c6, 100), 100);
    CHECK(d.size() == 1);
    CHECK_FALSE(d.perfect);

    auto s3 = symmetric_group(3);
    auto ds3 = derived_subgroup(s3, bfs_closure(s3, 100), 100);
    CHECK(ds3.size() == 3);
    for (const auto& code : ds3.elements) CHECK(Permutation::decode(code).pow(3).is_identity());

    auto sl = sl3_f2();
    auto dsl = derived_subgroup(sl, bfs_closure(sl, 1000), 1000);
    CHECK(dsl.size() == 168);
    CHECK(dsl.perfect);

    // S4: derived subgroup is A4, which needs the normal closure
    auto s4 = symmetric_group(4);
    CHECK(derived_subgroup(s4, bfs_closure(s4, 100), 100).size() == 12);
}

TEST_CASE("perfect norm in S3 matches exhaustive balanced words") {
    auto s3 = symmetric_group(3);
    auto g = bfs_closure(s3, 100);
    auto oracle = naive_perfect_norms(s3, 8);
    auto table = perfect_norm_table(g, 8);
    auto derived = derived_subgroup(s3, g, 100);
    VertexIndex idx(g);
    auto r = s3.generators()[1];
    const int rn = perfect_norm(g, idx.at(r), 8, derived);
    CHECK(rn == oracle.at(r.code));
    MESSAGE("perfect norm of the 3-cycle in S3: " << rn);
    CHECK(perfect_norm(g, 0, 8, derived) == 0);
    CHECK_THROWS_AS(perfect_norm(g, idx.at(s3.generators()[0]), 8, derived), DomainError);
}

TEST_CASE("pruned BFS equals naive enumeration on small groups") {
    for (auto grp : {symmetric_group(3), symmetric_group(4), direct_product({symmetric_group(3), cyclic_group(2)})}) {
        CAPTURE(grp.description());
        auto g = bfs_closure(grp, 100);
        REQUIRE(g.n <= 24);
        const int budget = grp.generator_count() > 2 ? 6 : 8;
        auto oracle = naive_perfect_norms(grp, budget);
        auto table = perfect_norm_table(g, budget);
        for (std::uint64_t v = 0; v < g.n; ++v) {
            auto it = oracle.find(g.element(v));
            CHECK(table.norm[v] == (it == oracle.end() ? kUnknownNorm : it->second));
        }
    }
}

TEST_CASE("budget exhaustion is distinguished from membership") {
    auto s4 = symmetric_group(4);
    auto g = bfs_closure(s4, 100);
    auto derived = derived_subgroup(s4, g, 100);
    auto table = perfect_norm_table(g, 12);
    std::uint64_t far = 0;
    for (std::uint64_t v = 0; v < g.n; ++v)
        if (table.norm[v] > table.norm[far]) far = v;
    REQUIRE(table.norm[far] > 2);
    CHECK_THROWS_AS(perfect_norm(g, far, table.norm[far] - 1, derived), BudgetExceeded);
    CHECK(perfect_norm(g, far, table.norm[far], derived) == table.norm[far]);
}

TEST_CASE("SL3(F2) perfect norm invariants") {
    auto grp = sl3_f2();
    auto g = bfs_closure(grp, 1000);
    const int budget = 12;
    auto table = perfect_norm_table(g, budget);
    auto word = bfs_distances(g, 0);
    VertexIndex idx(g);
    const int J = balanced_generator_cost(g, table);
    MESSAGE("J for SL3(F2) with six elementary generators: " << J);
    CHECK(J <= 4);

    int known = 0;
    for (std::uint64_t v = 0; v < g.n; ++v) {
        if (table.norm[v] == kUnknownNorm) continue;
        ++known;
        CHECK(word[v] <= table.norm[v]);
        CHECK(table.norm[v] <= J * word[v]);
        CHECK((table.norm[v] == 0) == (v == 0));
        const auto inv = idx.at(grp.invert(Element{g.element(v)}));
        CHECK(table.norm[inv] == table.norm[v]);
    }
    CHECK(known == 168);

    for (std::uint64_t x = 0; x < g.n; ++x)
        for (std::uint64_t y = 0; y < g.n; ++y) {
            const int a = table.norm[x], b = table.norm[y];
            if (a + b > budget) continue;
            const auto xy = idx.at(grp.multiply(Element{g.element(x)}, Element{g.element(y)}));
            REQUIRE(table.norm[xy] != kUnknownNorm);
            REQUIRE(table.norm[xy] <= a + b);
        }

    for (std::size_t i = 0; i < grp.generator_count(); ++i)
        for (std::size_t j = 0; j < grp.generator_count(); ++j) {
            auto c = grp.commutator(grp.generators()[i], grp.generators()[j]);
            CHECK(table.norm[idx.at(c)] <= 4);
        }

    std::ostringstream csv;
    write_perfect_norm_csv(csv, g, table);
    CHECK(csv.str().rfind("element,word_norm,perfect_norm\n", 0) == 0);
}

TEST_CASE("meet-in-the-middle search agrees with the table") {
    auto grp = symmetric_group(4);
    auto g = bfs_closure(grp, 100);
    auto table = perfect_norm_table(g, 10);
    for (std::uint64_t v = 0; v < g.n; ++v)
        CHECK(perfect_norm_search(grp, Element{g.element(v)}, 10) == table.norm[v]);

    auto sl = sl3_f2();
    auto gs = bfs_closure(sl, 1000);
    auto ts = perfect_norm_table(gs, 8);
    for (std::uint64_t v = 0; v < gs.n; v += 7)
        CHECK(perfect_norm_search(sl, Element{gs.element(v)}, 8) == ts.norm[v]);
}
