#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "gdist/distortion.hpp"
#include "gdist/errors.hpp"

using namespace gdist;

namespace {

CayleyGraph cycle_graph(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return graph_from_edges(n, e);
}

CayleyGraph complete_graph(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return graph_from_edges(n, e);
}

CayleyGraph cube_graph() {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t v = 0; v < 8; ++v)
        for (std::uint64_t b = 1; b < 8; b <<= 1)
            if (!(v & b)) e.emplace_back(v, v | b);
    return graph_from_edges(8, e);
}

CayleyGraph petersen_graph() {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> e;
    for (std::uint64_t i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(i, i + 5);
        e.emplace_back(i + 5, (i + 2) % 5 + 5);
    }
    return graph_from_edges(10, e);
}

// C4 oracle: opposite pairs {0,2} at (±x, 0, z), {1,3} at (0, ±y, −z); grid then refinement.
double c4_symmetric_oracle() {
    auto dist = [](double x, double y, double z) {
        const double edge = std::sqrt(x * x + y * y + 4 * z * z);
        const double r[] = {edge, x, y};  // diagonal ratios 2x/2 and 2y/2
        double lo = r[0], hi = r[0];
        for (double v : r) lo = std::min(lo, v), hi = std::max(hi, v);
        return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    };
    double best = std::numeric_limits<double>::infinity(), bx = 1, by = 1, bz = 0, step = 0.02;
    for (double x = step; x <= 2; x += step)
        for (double y = step; y <= 2; y += step)
            for (double z = 0; z <= 1; z += step)
                if (double d = dist(x, y, z); d < best) best = d, bx = x, by = y, bz = z;
    for (int round = 0; round < 30; ++round) {
        const double s = step;
        step /= 2;
        for (double x = bx - s; x <= bx + s; x += step)
            for (double y = by - s; y <= by + s; y += step)
                for (double z = std::max(0.0, bz - s); z <= bz + s; z += step)
                    if (double d = dist(x, y, z); d < best) best = d, bx = x, by = y, bz = z;
    }
    return best;
}

Embedding square() {
    Embedding phi(4, 2);
    phi << 0, 0, 1, 0, 1, 1, 0, 1;
    return phi;
}

}  // namespace

TEST_CASE("metric validation") {
    CHECK_NOTHROW(FiniteMetric::path(5).validate());
    FiniteMetric bad{Eigen::MatrixXd::Zero(3, 3)};
    bad.d << 0, 1, 5, 1, 0, 1, 5, 1, 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    FiniteMetric coincident{Eigen::MatrixXd::Zero(2, 2)};
    CHECK_THROWS_AS(coincident.validate(), DomainError);
    CHECK_THROWS_AS(distortion_profile(coincident, Embedding::Zero(2, 1)), DomainError);
    CHECK(FiniteMetric::from_graph(cycle_graph(6)).d(0, 3) == 3);
}

TEST_CASE("distortion profiles") {
    SUBCASE("isometric path") {
        Embedding line(6, 1);
        for (int i = 0; i < 6; ++i) line(i, 0) = i;
        auto p = distortion_profile(FiniteMetric::path(6), line);
        REQUIRE(p.t.size() == 5);
        for (std::size_t i = 0; i < p.t.size(); ++i) CHECK(p.rho[i] == doctest::Approx(p.t[i]));
        CHECK(p.lipschitz == doctest::Approx(1));
    }
    SUBCASE("constant map") {
        auto p = distortion_profile(FiniteMetric::uniform(4), Embedding::Constant(4, 3, 2.5));
        CHECK(p.lipschitz == 0);
        for (double r : p.rho) CHECK(r == 0);
    }
    SUBCASE("unit square on C4") {
        auto m = FiniteMetric::from_graph(cycle_graph(4));
        auto p = distortion_profile(m, square());
        CHECK(p.lipschitz == doctest::Approx(1));
        CHECK(p.at(2) == doctest::Approx(std::sqrt(2.0)));
        CHECK(p.at(1) == doctest::Approx(1));
        CHECK(std::isinf(p.at(3)));
        CHECK(lipschitz_constant(cycle_graph(4), square()) == doctest::Approx(1));
    }
    SUBCASE("normalization and monotonicity on random maps") {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> g;
        auto m = FiniteMetric::from_graph(petersen_graph());
        for (int trial = 0; trial < 50; ++trial) {
            Embedding phi(10, 3);
            for (Eigen::Index i = 0; i < phi.size(); ++i) phi.data()[i] = g(rng);
            auto p = distortion_profile(m, phi);
            for (std::size_t i = 0; i < p.t.size(); ++i) {
                CHECK(p.rho[i] <= p.t[i] + 1e-12);
                if (i) CHECK(p.rho[i] >= p.rho[i - 1]);
            }
            // brute-force oracle at each threshold
            for (std::size_t k = 0; k < p.t.size(); ++k) {
                double best = std::numeric_limits<double>::infinity();
                for (int a = 0; a < 10; ++a)
                    for (int b = 0; b < 10; ++b)
                        if (a != b && m.d(a, b) >= p.t[k])
                            best = std::min(best, (phi.row(a) - phi.row(b)).norm() / p.lipschitz);
                CHECK(p.rho[k] == doctest::Approx(best));
            }
        }
    }
}

TEST_CASE("profile comparison") {
    DistortionProfile identity;
    for (int t = 1; t <= 20; ++t) identity.t.push_back(t), identity.rho.push_back(t);
    auto c = compare_profiles(identity, [](double t) { return std::sqrt(t); }, 20);
    CHECK(c.verdict == Verdict::better);
    CHECK(c.tail_start == doctest::Approx(2));  // equal at t = 1
    CHECK(c.finite_horizon);

    DistortionProfile ones = identity;
    for (auto& r : ones.rho) r = 1;
    auto w = compare_profiles(ones, [](double t) { return std::log1p(t); }, 10);
    CHECK(w.verdict == Verdict::worse);
    REQUIRE(w.tail_start);
    CHECK(*w.tail_start == 2);  // first grid point beyond e − 1
    CHECK(*w.tail_start > std::exp(1.0) - 1);
    CHECK(w.better_at == doctest::Approx(1));

    DistortionProfile osc = identity;
    for (std::size_t i = 0; i < osc.t.size(); ++i) osc.rho[i] = osc.t[i] + ((i % 2) ? 0.5 : -0.5);
    auto n = compare_profiles(osc, [](double t) { return t; }, 20);
    CHECK(n.verdict == Verdict::neither);
    CHECK(n.better_at);
    CHECK(n.worse_at);
    CHECK_FALSE(n.tail_start);

    CHECK_THROWS_AS(compare_profiles(identity, [](double t) { return t; }, 0.5), UsageError);
    CHECK(std::string(verdict_name(Verdict::worse)) == "worse");
}

TEST_CASE("least-distortion optimizer") {
    auto path = min_distortion_embed(FiniteMetric::path(7));
    CHECK(path.D == doctest::Approx(1).epsilon(1e-6));
    CHECK(path.converged);

    auto simplex = min_distortion_embed(FiniteMetric::uniform(4));
    CHECK(simplex.D == doctest::Approx(1).epsilon(1e-6));

    auto c4m = FiniteMetric::from_graph(cycle_graph(4));
    auto c4 = min_distortion_embed(c4m);
    const double oracle = c4_symmetric_oracle();
    CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(std::abs(c4.D - std::sqrt(2.0)) <= 1e-3);
    CHECK(distortion_of(c4m, c4.embedding) == doctest::Approx(c4.D));
    CHECK(c4.lower <= c4.D);

    // deterministic given the seed
    auto again = min_distortion_embed(c4m);
    CHECK(again.D == c4.D);
    CHECK(again.embedding == c4.embedding);

    CHECK_THROWS_AS(min_distortion_embed(c4m, 0, 0.0), UsageError);
}

TEST_CASE("sandwich: spectral lower bound against the optimizer") {
    for (const auto& g : {cycle_graph(4), cycle_graph(5), cycle_graph(6), cycle_graph(8), complete_graph(4),
                          complete_graph(6), cube_graph(), petersen_graph()}) {
        const double lower = c2_lower_bound(g, 1e-10);
        auto opt = min_distortion_embed(FiniteMetric::from_graph(g), 0, 1e-4);
        CAPTURE(g.n);
        CHECK(lower <= opt.D * (1 + 1e-9));
        CHECK(distortion_of(FiniteMetric::from_graph(g), opt.embedding) <= opt.D * (1 + 1e-9));
    }
    CHECK(c2_lower_bound(cycle_graph(4)) >= 1 - 1e-12);
    CHECK(c2_lower_bound(complete_graph(7)) <= 1 + 1e-12);
}

TEST_CASE("scaling invariance") {
    auto base = FiniteMetric::from_graph(cycle_graph(6));
    auto d1 = min_distortion_embed(base, 0, 1e-6);
    for (double s : {2.0, 10.0}) {
        auto ds = min_distortion_embed(base.scaled(s), 0, 1e-6);
        CHECK(std::abs(ds.D - d1.D) <= 1e-5 * d1.D);

        Embedding phi = d1.embedding;
        auto p1 = distortion_profile(base, phi, false);
        auto ps = distortion_profile(base.scaled(s), phi * s, false);
        REQUIRE(p1.t.size() == ps.t.size());
        for (std::size_t i = 0; i < p1.t.size(); ++i) {
            CHECK(ps.t[i] == doctest::Approx(s * p1.t[i]));
            CHECK(ps.rho[i] == doctest::Approx(s * p1.rho[i]));
        }
    }
}

TEST_CASE("Poincare witness") {
    SUBCASE("constant map") {
        auto g = cycle_graph(6);
        auto cert = certificate(g, 1e-10, 1);
        auto w = poincare_witness(g, Embedding::Zero(6, 2), cert, 3, 5, true);
        CHECK(w.image_distance == 0);
        CHECK(w.distance >= 3);
    }
    SUBCASE("simplex on K_n") {
        for (std::uint64_t n : {4u, 7u}) {
            auto g = complete_graph(n);
            auto cert = certificate(g, 1e-10, 1);
            Embedding phi = Embedding::Identity(n, n) / std::sqrt(2.0);  // unit edges
            auto w = poincare_witness(g, phi, cert, 1, 3, true);
            CHECK(w.image_distance == doctest::Approx(1));
            CHECK(w.bound == doctest::Approx(std::sqrt((n - 1.0) / (n * ((n - 1.0) / n)))));
            CHECK(w.image_distance <= w.bound + 1e-12);
        }
    }
    SUBCASE("rejects maps that are not 1-Lipschitz") {
        auto g = cycle_graph(4);
        CHECK_THROWS_AS(poincare_witness(g, square() * 3, certificate(g, 1e-10, 1), 2, 1, true), UsageError);
        CHECK_THROWS_AS(poincare_witness(g, square(), certificate(g, 1e-10, 1), 3, 1, true), UsageError);
    }
    SUBCASE("seeded runs on optimizer outputs") {
        const std::vector<CayleyGraph> graphs = {cycle_graph(5), cycle_graph(8), cube_graph(), petersen_graph()};
        std::vector<SpectralCertificate> certs;
        std::vector<Embedding> outputs;
        for (std::size_t k = 0; k < graphs.size(); ++k) {
            certs.push_back(certificate(graphs[k], 1e-10, 1));
            for (std::uint64_t seed = 1; seed <= 5; ++seed)
                outputs.push_back(normalize_lipschitz(
                    graphs[k], min_distortion_embed(FiniteMetric::from_graph(graphs[k]), 0, 1e-3, 400, seed).embedding));
        }
        int runs = 0;
        std::mt19937_64 rng(2024);
        while (runs < 1000) {
            const std::size_t k = rng() % graphs.size();
            const auto& phi = outputs[k * 5 + rng() % 5];
            const auto& cert = certs[k];
            const int t = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cert.diameter));
            const bool exhaustive = rng() % 2;
            auto w = poincare_witness(graphs[k], phi, cert, t, rng(), exhaustive);
            REQUIRE(w.image_distance <= w.bound * (1 + 1e-9));
            REQUIRE(w.distance >= t);
            ++runs;
        }
        CHECK(runs == 1000);
    }
}

TEST_CASE("Frechet and spectral embeddings are 1-Lipschitz") {
    auto g = petersen_graph();
    auto f = frechet_embedding(g, 4, 9);
    CHECK(lipschitz_constant(g, f) <= 1 + 1e-12);
    CHECK(lipschitz_constant(FiniteMetric::from_graph(g), f) <= 1 + 1e-12);
    auto spec = spectral_gap(g, 1e-10, 1);
    auto s = spectral_embedding(g, spec.eigenvector);
    CHECK(lipschitz_constant(g, s) == doctest::Approx(1));
    CHECK_THROWS_AS(frechet_embedding(g, 11, 1), UsageError);
}

TEST_CASE("file formats") {
    std::stringstream ss;
    write_embedding(ss, square());
    CHECK(ss.str().rfind("4 2\n", 0) == 0);
    CHECK(read_embedding(ss) == square());

    std::stringstream bad("3 2\n1 2\n3");
    CHECK_THROWS_AS(read_embedding(bad), UsageError);

    std::stringstream metric("3\n0 1 2\n1 0 1\n2 1 0\n");
    CHECK(read_metric(metric).d == FiniteMetric::path(3).d);

    std::stringstream csv;
    write_profile_csv(csv, distortion_profile(FiniteMetric::path(3), Embedding(FiniteMetric::path(3).d.col(0))));
    CHECK(csv.str() == "t,rho\n1,1\n2,2\n");
}

TEST_CASE("graph profile agrees with the dense profile") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (const auto& graph : {petersen_graph(), cube_graph(), cycle_graph(9)}) {
        Embedding phi(static_cast<Eigen::Index>(graph.n), 2);
        for (Eigen::Index i = 0; i < phi.size(); ++i) phi.data()[i] = g(rng);
        auto dense = distortion_profile(FiniteMetric::from_graph(graph), phi);
        auto bfs = graph_profile(graph, phi);
        CHECK_FALSE(bfs.sampled);
        CHECK(bfs.t == dense.t);
        CHECK(bfs.lipschitz == doctest::Approx(dense.lipschitz));
        for (std::size_t i = 0; i < bfs.t.size(); ++i) CHECK(bfs.rho[i] == doctest::Approx(dense.rho[i]));
        // a subset of sources can only raise the minima
        auto sampled = graph_profile(graph, phi, 3, 7);
        CHECK(sampled.sampled);
        for (std::size_t i = 0; i < sampled.t.size(); ++i) CHECK(sampled.at(sampled.t[i]) >= bfs.at(sampled.t[i]) - 1e-12);
    }
}
