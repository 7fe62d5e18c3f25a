#include <doctest.h>

#include <array>
#include <random>

#include "gdist/errors.hpp"
#include "gdist/group.hpp"
#include "gdist/matrix3.hpp"
#include "gdist/permutation.hpp"
#include "gdist/ring.hpp"

using namespace gdist;

namespace {

RingElement poly(std::uint32_t p, int level, std::initializer_list<std::int64_t> c) {
    std::vector<std::int64_t> v(c);
    return RingElement::from_coeffs(p, level, v);
}

// Independent oracle: plain integer 3x3 matrices mod 2.
using IntMat = std::array<std::array<int, 3>, 3>;

IntMat int_mul(const IntMat& a, const IntMat& b, int p = 2) {
    IntMat c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int acc = 0;
            for (int k = 0; k < 3; ++k) acc += a[i][k] * b[k][j];
            c[i][j] = acc % p;
        }
    return c;
}

IntMat int_elem(int r, int c, int v) {
    IntMat m{};
    for (int i = 0; i < 3; ++i) m[i][i] = 1;
    m[r - 1][c - 1] = v;
    return m;
}

Element random_word(const GroupHandle& g, std::mt19937_64& rng, int len) {
    std::vector<int> letters;
    for (int i = 0; i < len; ++i) letters.push_back(static_cast<int>(rng() % (2 * g.generator_count())));
    return g.evaluate(letters);
}

GroupHandle sl3_small(std::uint32_t p, int level) {
    std::vector<std::pair<std::string, Matrix3>> gens;
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            if (r != c)
                gens.emplace_back("X" + std::to_string(r) + std::to_string(c),
                                  elementary_matrix(r, c, RingElement::constant(p, level, 1)));
    if (level >= 2) gens.emplace_back("X12(t)", elementary_matrix(1, 2, RingElement::monomial(p, level, 1, 1)));
    return matrix_group(p, level, gens, "SL3 test");
}

}  // namespace

TEST_CASE("ring arithmetic examples") {
    auto one_plus_t = poly(2, 2, {1, 1});
    CHECK((one_plus_t * one_plus_t) == RingElement::constant(2, 2, 1));

    CHECK(RingElement::constant(3, 1, 2).inverse() == RingElement::constant(3, 1, 2));

    auto u = poly(2, 3, {1, 1});
    CHECK(u.inverse() == poly(2, 3, {1, 1, 1}));
    CHECK((u * poly(2, 3, {1, 1, 1})) == RingElement::constant(2, 3, 1));
}

TEST_CASE("ring errors") {
    CHECK_THROWS_AS(RingElement::monomial(2, 2, 1, 1).inverse(), NotInvertible);
    CHECK_THROWS_AS(RingElement::constant(2, 2, 1) + RingElement::constant(3, 2, 1), UsageError);
    CHECK_THROWS_AS(RingElement::constant(2, 2, 1) * RingElement::constant(2, 3, 1), UsageError);
    CHECK_THROWS_AS(RingElement(4, 1), UsageError);
}

TEST_CASE("ring inverse is exact on every unit") {
    for (std::uint32_t p : {2u, 3u, 5u})
        for (int level = 1; level <= 3; ++level) {
            std::mt19937_64 rng(p * 10 + static_cast<unsigned>(level));
            for (int trial = 0; trial < 200; ++trial) {
                std::vector<std::int64_t> c(static_cast<std::size_t>(level));
                for (auto& x : c) x = static_cast<std::int64_t>(rng() % p);
                c[0] = 1 + static_cast<std::int64_t>(rng() % (p - 1));
                auto a = RingElement::from_coeffs(p, level, c);
                CHECK((a * a.inverse()) == RingElement::constant(p, level, 1));
            }
        }
}

TEST_CASE("matrix examples") {
    const auto one = RingElement::constant(2, 1, 1);
    auto A = elementary_matrix(1, 2, one) * elementary_matrix(2, 3, one);
    CHECK((Matrix3::identity(2, 1) * A) == A);

    auto P = poly(3, 2, {1, 2});
    CHECK(elementary_matrix(1, 2, P).inverse() == elementary_matrix(1, 2, -P));

    // [X12(1), X23(1)] against integer matrices mod 2
    auto comm = commutator(elementary_matrix(1, 2, one), elementary_matrix(2, 3, one));
    IntMat a = int_elem(1, 2, 1), b = int_elem(2, 3, 1);
    IntMat oracle = int_mul(int_mul(int_mul(a, b), a), b);  // every factor is an involution mod 2
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(comm(i, j).coeff(0) == static_cast<std::uint32_t>(oracle[i][j]));
    CHECK(comm == elementary_matrix(1, 3, one));

    // product X12(1) X23(1) has ones at (1,2), (2,3), (1,3)
    IntMat prod = int_mul(a, b, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(A(i, j).coeff(0) == static_cast<std::uint32_t>(prod[i][j]));
}

TEST_CASE("matrix inverse rejects det != 1") {
    Matrix3 m = Matrix3::identity(3, 1);
    m(0, 0) = RingElement::constant(3, 1, 2);
    CHECK_THROWS_AS(m.inverse(), InvalidElement);
}

TEST_CASE("elementary matrices") {
    CHECK(elementary_matrix(1, 2, RingElement(2, 2)) == Matrix3::identity(2, 2));
    CHECK_THROWS_AS(elementary_matrix(2, 2, RingElement::constant(2, 1, 1)), UsageError);

    auto P = poly(3, 3, {2, 1, 0}), Q = poly(3, 3, {1, 0, 2});
    CHECK(elementary_matrix(1, 2, P) * elementary_matrix(1, 2, Q) == elementary_matrix(1, 2, P + Q));

    auto x = elementary_matrix(1, 2, RingElement::monomial(2, 2, 1, 1));
    CHECK(x != Matrix3::identity(2, 2));
    CHECK(x * x == Matrix3::identity(2, 2));
}

TEST_CASE("permutation examples") {
    auto id = Permutation(3);
    auto s01 = Permutation::from_cycles(3, {{0, 1}});
    auto s12 = Permutation::from_cycles(3, {{1, 2}});
    CHECK(id * s01 == s01);
    // right action: x.(a*b) = b(a(x)); 0->1->2, 1->0->0, 2->2->1
    auto prod = s01 * s12;
    CHECK(prod.images() == std::vector<std::uint16_t>{2, 0, 1});
    CHECK(prod == Permutation::from_cycles(3, {{0, 2, 1}}));
    CHECK(Permutation::from_cycles(3, {{0, 1, 2}}).inverse() == Permutation::from_cycles(3, {{0, 2, 1}}));
    CHECK_THROWS_AS(Permutation(3) * Permutation(4), UsageError);
    CHECK_THROWS_AS(Permutation(std::vector<std::uint16_t>{0, 0, 1}), UsageError);
}

TEST_CASE("wreath law over a 2-cycle") {
    CycleWreath w(2, 2);
    auto swap = Permutation::from_cycles(2, {{0, 1}});
    auto id = Permutation(2);
    std::vector<Permutation> f{swap, id};
    auto e = w.make(f, 1);
    auto sq = w.multiply(e, e);
    std::vector<Permutation> expect{swap, swap};
    CHECK(sq == w.make(expect, 0));
    CHECK(w.multiply(w.identity(), e) == e);
}

TEST_CASE("wreath commutator base part on three coordinates") {
    CycleWreath w(3, 3);
    std::vector<Permutation> fvals{Permutation::from_cycles(3, {{0, 1}}), Permutation::from_cycles(3, {{0, 1, 2}}),
                                   Permutation(3)};
    auto f = w.make(fvals, 0);
    for (std::size_t rot = 0; rot < 3; ++rot) {
        std::vector<Permutation> none(3, Permutation(3));
        auto g = w.make(none, rot);
        auto comm = w.multiply(w.multiply(w.invert(f), w.invert(g)), w.multiply(f, g));
        // oracle: x -> f(x)^{-1} f(x . g^{-1}) with x . r^{-j} = x + j
        std::vector<Permutation> expect;
        for (std::size_t x = 0; x < 3; ++x) expect.push_back(fvals[x].inverse() * fvals[(x + rot) % 3]);
        CHECK(comm == w.make(expect, 0));
    }
}

TEST_CASE("group laws on random triples for every carrier") {
    std::vector<GroupHandle> carriers{sl3_small(2, 2), sl3_small(3, 1), symmetric_group(5),
                                      direct_product({symmetric_group(3), cyclic_group(4)})};
    CycleWreath w(3, 4);
    auto s = Permutation::from_cycles(3, {{0, 1}});
    std::vector<Permutation> tv{Permutation(3), s, Permutation(3), s};
    carriers.push_back(w.handle({{"t", w.make(tv, 0)}, {"r", w.rotation_generator()}}, "S3 wr C4 test"));

    for (const auto& g : carriers) {
        CAPTURE(g.description());
        std::mt19937_64 rng(7);
        for (int i = 0; i < 10000 / static_cast<int>(carriers.size()); ++i) {
            auto a = random_word(g, rng, 6), b = random_word(g, rng, 6), c = random_word(g, rng, 6);
            REQUIRE(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
            REQUIRE(g.multiply(g.identity(), a) == a);
            REQUIRE(g.multiply(a, g.identity()) == a);
        }
        for (const auto& gen : g.generators()) {
            CHECK(g.invert(g.invert(gen)) == gen);
            CHECK(g.multiply(gen, g.invert(gen)) == g.identity());
        }
    }
}

TEST_CASE("matrix products keep det = 1") {
    auto g = sl3_small(3, 2);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        auto m = Matrix3::decode(3, 2, random_word(g, rng, 10).code);
        CHECK(m.det() == RingElement::constant(3, 2, 1));
        CHECK(m.inverse().det() == RingElement::constant(3, 2, 1));
    }
}
