#include <doctest.h>

#include <chrono>
#include <set>
#include <sstream>

#include "gdist/derived_imbed.hpp"
#include "gdist/errors.hpp"

using namespace gdist;

namespace {

// Oracle for G = C2 = <s>: reduce every word over {s, x, x^-1} of length
// <= radius by free cancellation and count distinct reduced words.
std::size_t c2_free_product_ball_oracle(int radius) {
    std::set<std::string> forms;
    std::string word;
    auto reduce = [](const std::string& w) {
        std::string out;
        for (char c : w) {
            if (!out.empty() && ((c == 's' && out.back() == 's') || (c == 'x' && out.back() == 'X') ||
                                 (c == 'X' && out.back() == 'x')))
                out.pop_back();
            else
                out.push_back(c);
        }
        return out;
    };
    auto rec = [&](auto&& self, int left) -> void {
        forms.insert(reduce(word));
        if (left == 0) return;
        for (char c : {'s', 'x', 'X'}) {
            word.push_back(c);
            self(self, left - 1);
            word.pop_back();
        }
    };
    rec(rec, radius);
    // reduced words of length <= radius
    std::size_t n = 0;
    for (const auto& f : forms)
        if (static_cast<int>(f.size()) <= radius) ++n;
    return n;
}

}  // namespace

TEST_CASE("free product balls") {
    auto c2 = cyclic_group(2);
    auto g = bfs_closure(c2, 10);
    CHECK(free_product_ball(g, 0, 100).size() == 1);
    CHECK(free_product_ball(g, 1, 100).size() == 4);
    CHECK(free_product_ball(g, 2, 100).size() == 10);
    for (int r = 0; r <= 7; ++r) CHECK(free_product_ball(g, r, 100000).size() == c2_free_product_ball_oracle(r));
    CHECK(free_product_ball(g, 5, 1000).size() == 94);
    CHECK_THROWS_AS(free_product_ball(g, 5, 50), BudgetExceeded);
}

TEST_CASE("identity x-image is rejected") {
    auto c2 = cyclic_group(2);
    auto g = bfs_closure(c2, 10);
    auto images = regular_images(c2, g, 4);
    CHECK_FALSE(injective_on_ball(g, images, Permutation(4), 1, 1000));
}

TEST_CASE("trivial group only needs a long cycle") {
    auto triv = cyclic_group(1);
    auto g = bfs_closure(triv, 10);
    REQUIRE(g.n == 1);
    QuotientSearch qs;
    qs.seed = 5;
    auto q = find_ball_faithful_quotient(triv, g, 1, qs);
    CHECK(q.x.order() > 2 * 3);
}

TEST_CASE("quotient search for C2 is verified by direct evaluation") {
    auto c2 = cyclic_group(2);
    auto g = bfs_closure(c2, 10);
    QuotientSearch qs;
    auto q = find_ball_faithful_quotient(c2, g, 2, qs);
    CHECK(q.verified_radius == 5);
    CHECK(q.ball_size == 94);
    auto ball = free_product_ball(g, 5, 1000);
    std::set<Permutation> images;
    for (const auto& w : ball) images.insert(evaluate_word(q, w));
    CHECK(images.size() == ball.size());
    // the G-part honours the relations of G
    CHECK(q.generator_images[0].pow(2).is_identity());
}

TEST_CASE("prop sandwich for small groups") {
    for (auto grp : {cyclic_group(2), cyclic_group(3), symmetric_group(3)}) {
        CAPTURE(grp.description());
        auto t0 = std::chrono::steady_clock::now();
        auto g = bfs_closure(grp, 100);
        QuotientSearch qs;
        auto q = find_ball_faithful_quotient(grp, g, static_cast<int>(g.n), qs);
        auto host = build_wreath_host(grp, g, q, 20000);
        CHECK(host.iota[0] == host.H.identity());
        auto rep = verify_sandwich(grp, g, host);
        CHECK(rep.homomorphism);
        CHECK(rep.injective);
        for (const auto& row : rep.rows) {
            CHECK(row.upper_ok);
            if (row.word_norm == 1) {
                CHECK(row.perfect_norm >= 2);
                CHECK(row.perfect_norm <= 4);
            }
        }
        MESSAGE(grp.description() << ": degree " << q.degree << ", lower-bound violations " << rep.lower_violations
                                  << ", host order >= " << host.order_bound << ", "
                                  << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                                  << " s");
        std::ostringstream csv;
        write_sandwich_csv(csv, g, rep);
        CHECK(csv.str().find("element,word_norm,perfect_norm,lower_ok,upper_ok") == 0);
        auto js = sandwich_summary(g, q, host, rep);
        CHECK(js["group_order"] == g.n);
    }
}
