#include "gdist/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>

#include "gdist/errors.hpp"

namespace gdist {

namespace {

// Deterministic across standard libraries, unlike std::shuffle.
std::vector<std::uint64_t> seeded_order(std::uint64_t n, std::uint64_t seed) {
    std::vector<std::uint64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    return order;
}

}  // namespace

void FiniteMetric::validate(double tol) const {
    const auto n = d.rows();
    if (d.cols() != n) throw DomainError("distance matrix is not square");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(d(i, i)) > tol) throw DomainError("nonzero diagonal");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(d(i, j))) throw DomainError("non-finite distance");
            if (std::abs(d(i, j) - d(j, i)) > tol) throw DomainError("asymmetric distance matrix");
            if (i != j && d(i, j) <= tol) throw DomainError("coincident points");
        }
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (d(i, j) > d(i, k) + d(k, j) + tol) throw DomainError("triangle inequality fails");
}

FiniteMetric FiniteMetric::scaled(double s) const {
    if (!(s > 0)) throw UsageError("scale must be positive");
    return FiniteMetric{d * s};
}

FiniteMetric FiniteMetric::from_graph(const CayleyGraph& g) {
    FiniteMetric m{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(g.n))};
    for (std::uint64_t v = 0; v < g.n; ++v) {
        auto dist = bfs_distances(g, v);
        for (std::uint64_t w = 0; w < g.n; ++w) {
            if (dist[w] == kUnreached) throw DomainError("graph is disconnected");
            m.d(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) = dist[w];
        }
    }
    return m;
}

FiniteMetric FiniteMetric::path(std::size_t n) {
    FiniteMetric m{Eigen::MatrixXd(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.d(i, j) = std::abs(static_cast<double>(i) - static_cast<double>(j));
    return m;
}

FiniteMetric FiniteMetric::uniform(std::size_t n) {
    FiniteMetric m{Eigen::MatrixXd::Ones(n, n)};
    m.d.diagonal().setZero();
    return m;
}

double lipschitz_constant(const FiniteMetric& m, const Embedding& phi) {
    if (static_cast<std::size_t>(phi.rows()) != m.size()) throw UsageError("embedding size does not match the metric");
    double L = 0;
    for (Eigen::Index i = 0; i < phi.rows(); ++i)
        for (Eigen::Index j = i + 1; j < phi.rows(); ++j)
            L = std::max(L, (phi.row(i) - phi.row(j)).norm() / m.d(i, j));
    return L;
}

double lipschitz_constant(const CayleyGraph& g, const Embedding& phi) {
    if (static_cast<std::uint64_t>(phi.rows()) != g.n) throw UsageError("embedding size does not match the graph");
    double L2 = 0;
    for (std::uint64_t v = 0; v < g.n; ++v)
        for (auto k = g.offsets[v]; k < g.offsets[v + 1]; ++k)
            L2 = std::max(L2, (phi.row(static_cast<Eigen::Index>(v)) -
                               phi.row(static_cast<Eigen::Index>(g.neighbors[k]))).squaredNorm());
    return std::sqrt(L2);
}

double distortion_of(const FiniteMetric& m, const Embedding& phi) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (Eigen::Index i = 0; i < phi.rows(); ++i)
        for (Eigen::Index j = i + 1; j < phi.rows(); ++j) {
            const double r = (phi.row(i) - phi.row(j)).norm() / m.d(i, j);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    if (phi.rows() < 2) return 1;
    if (lo <= 0) throw DomainError("embedding collapses a pair of points");
    return hi / lo;
}

double DistortionProfile::at(double s) const {
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= s) return rho[i];
    return std::numeric_limits<double>::infinity();  // no pair that far: inf over the empty set
}

DistortionProfile distortion_profile(const FiniteMetric& m, const Embedding& phi, bool normalize) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m.d(i, j) <= 0) throw DomainError("degenerate metric: coincident points");
    DistortionProfile p;
    p.lipschitz = lipschitz_constant(m, phi);
    const double scale = (normalize && p.lipschitz > 0) ? 1.0 / p.lipschitz : 1.0;

    // min image distance per exact source distance, then suffix minima
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            pairs.emplace_back(m.d(i, j), scale * (phi.row(static_cast<Eigen::Index>(i)) -
                                                   phi.row(static_cast<Eigen::Index>(j))).norm());
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [dist, img] : pairs) {
        if (p.t.empty() || dist > p.t.back()) {
            p.t.push_back(dist);
            p.rho.push_back(img);
        } else {
            p.rho.back() = std::min(p.rho.back(), img);
        }
    }
    for (std::size_t i = p.rho.size(); i-- > 1;) p.rho[i - 1] = std::min(p.rho[i - 1], p.rho[i]);
    return p;
}

DistortionProfile graph_profile(const CayleyGraph& g, const Embedding& phi, std::size_t sources, std::uint64_t seed) {
    if (g.n < 2) throw DomainError("profile needs at least two points");
    DistortionProfile p;
    p.lipschitz = lipschitz_constant(g, phi);
    const double scale = p.lipschitz > 0 ? 1.0 / p.lipschitz : 1.0;
    auto order = seeded_order(g.n, seed);
    if (sources > 0 && sources < g.n) {
        order.resize(sources);
        p.sampled = true;
    }
    std::vector<double> best;  // squared, indexed by exact distance
    for (auto x : order) {
        const auto dist = bfs_distances(g, x);
        const auto px = phi.row(static_cast<Eigen::Index>(x));
        for (std::uint64_t y = 0; y < g.n; ++y) {
            if (dist[y] <= 0) {
                if (dist[y] == kUnreached) throw DomainError("graph is disconnected");
                continue;
            }
            const auto d = static_cast<std::size_t>(dist[y]);
            if (best.size() <= d) best.resize(d + 1, std::numeric_limits<double>::infinity());
            best[d] = std::min(best[d], (px - phi.row(static_cast<Eigen::Index>(y))).squaredNorm());
        }
    }
    for (std::size_t d = 1; d < best.size(); ++d) {
        if (!std::isfinite(best[d])) continue;
        p.t.push_back(static_cast<double>(d));
        p.rho.push_back(scale * std::sqrt(best[d]));
    }
    for (std::size_t i = p.rho.size(); i-- > 1;) p.rho[i - 1] = std::min(p.rho[i - 1], p.rho[i]);
    return p;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::better: return "better";
        case Verdict::worse: return "worse";
        case Verdict::neither: return "neither";
    }
    return "?";
}

ProfileComparison compare_profiles(const DistortionProfile& profile, const std::function<double(double)>& rho,
                                   double horizon) {
    ProfileComparison c;
    c.horizon = horizon;
    std::vector<int> sign;
    std::vector<double> grid;
    for (std::size_t i = 0; i < profile.t.size() && profile.t[i] <= horizon; ++i) {
        const double diff = profile.rho[i] - rho(profile.t[i]);
        grid.push_back(profile.t[i]);
        sign.push_back(std::abs(diff) <= 1e-12 ? 0 : (diff > 0 ? 1 : -1));
        if (diff > 1e-12) c.better_at = profile.t[i];
        if (diff < -1e-12) c.worse_at = profile.t[i];
    }
    if (grid.empty()) throw UsageError("horizon lies below every achieved distance");
    const int last = sign.back();
    std::size_t start = sign.size() - 1;
    while (start > 0 && sign[start - 1] == last) --start;
    const bool long_tail = 2 * (sign.size() - start) >= sign.size();
    if (last != 0 && long_tail) {
        c.verdict = last > 0 ? Verdict::better : Verdict::worse;
        c.tail_start = grid[start];
    }
    return c;
}

PoincareWitness poincare_witness(const CayleyGraph& g, const Embedding& phi, const SpectralCertificate& cert, int t,
                                 std::uint64_t seed, bool exhaustive) {
    const CertificateRow* row = nullptr;
    for (const auto& r : cert.table)
        if (r.t == t) row = &r;
    if (!row || row->P_t <= 0) throw UsageError("no pairs at distance >= " + std::to_string(t));
    const double lip = lipschitz_constant(g, phi);
    if (lip > 1 + 1e-9) throw UsageError("embedding is not 1-Lipschitz (constant " + std::to_string(lip) + ")");

    PoincareWitness w;
    w.bound = row->M_t;
    double best2 = std::numeric_limits<double>::infinity();
    const double bound2 = w.bound * w.bound;
    for (auto x : seeded_order(g.n, seed)) {
        const auto dist = bfs_distances(g, x);
        const auto px = phi.row(static_cast<Eigen::Index>(x));
        for (std::uint64_t y = 0; y < g.n; ++y) {
            if (dist[y] < t) continue;
            ++w.pairs_scanned;
            const double d2 = (px - phi.row(static_cast<Eigen::Index>(y))).squaredNorm();
            if (d2 < best2) {
                best2 = d2;
                w.x = x;
                w.y = y;
                w.distance = dist[y];
            }
        }
        if (!exhaustive && best2 <= bound2) break;
    }
    w.image_distance = std::sqrt(best2);
    if (!(w.image_distance <= w.bound * (1 + 1e-9)))
        throw GuaranteeViolation("no pair at distance >= " + std::to_string(t) + " within M(t) = " +
                                 std::to_string(w.bound) + "; best image distance " + std::to_string(w.image_distance));
    return w;
}

double c2_lower_bound(const CayleyGraph& g, double tol, std::uint64_t seed) {
    return certificate(g, tol, seed).lower_bound;
}

namespace {

// Feasibility of {G PSD, lo_ij <= G_ii + G_jj − 2 G_ij <= hi_ij} by cyclic projections:
// one Kaczmarz sweep over the pair half-spaces, then PSD clipping.
struct GramSolver {
    Eigen::MatrixXd d2;  // squared distances
    Eigen::Index dim;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;  // seeded sweep order

    Embedding factor(const Eigen::MatrixXd& G) const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        const Eigen::Index n = G.rows(), k = std::min(dim, n);
        Embedding X(n, k);
        for (Eigen::Index c = 0; c < k; ++c) {
            const Eigen::Index idx = n - 1 - c;  // eigenvalues ascend
            X.col(c) = es.eigenvectors().col(idx) * std::sqrt(std::max(0.0, es.eigenvalues()[idx]));
        }
        return X;
    }

    // Ratios ‖x_i − x_j‖² / d²_ij.
    std::pair<double, double> ratio_range(const Embedding& X) const {
        const Eigen::MatrixXd G = X * X.transpose();
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (const auto& [i, j] : pairs) {
            const double r = std::max(0.0, G(i, i) + G(j, j) - 2 * G(i, j)) / d2(i, j);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return {lo, hi};
    }

    double distortion(const Embedding& X) const {
        const auto [lo, hi] = ratio_range(X);
        return lo > 0 ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();
    }

    void sweep(Eigen::MatrixXd& G, double box) const {
        for (const auto& [i, j] : pairs) {
            const double L = G(i, i) + G(j, j) - 2 * G(i, j), lo = d2(i, j), hi = box * d2(i, j);
            const double c = L < lo ? (lo - L) / 4 : (L > hi ? (hi - L) / 4 : 0.0);
            if (c == 0.0) continue;
            G(i, i) += c;
            G(j, j) += c;
            G(i, j) -= c;
            G(j, i) -= c;
        }
    }
};

}  // namespace

OptimizeResult min_distortion_embed(const FiniteMetric& m, std::size_t dim, double tol, int iteration_cap,
                                    std::uint64_t seed, double lower_hint) {
    m.validate();
    if (!(tol > 0)) throw UsageError("tolerance must be positive");
    const auto n = static_cast<Eigen::Index>(m.size());
    OptimizeResult out;
    if (n < 2) {
        out.embedding = Embedding::Zero(n, 1);
        out.D = 1;
        out.converged = true;
        return out;
    }
    GramSolver s{m.d.cwiseProduct(m.d), dim ? static_cast<Eigen::Index>(dim) : n - 1, {}};
    const auto order = seeded_order(static_cast<std::uint64_t>(n * (n - 1) / 2), seed);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> all;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) all.emplace_back(i, j);
    for (auto k : order) s.pairs.push_back(all[k]);

    // classical scaling as the first upper bound
    const Eigen::MatrixXd J =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    out.embedding = s.factor(-0.5 * J * s.d2 * J);
    out.D = s.distortion(out.embedding);
    out.lower = std::max(1.0, lower_hint);

    bool capped = false;
    auto feasible = [&](double target, Embedding& found) {
        // aim slightly inside the box so the cyclic projections reach the target in finitely many steps
        const double aim = target - 0.25 * (target - out.lower);
        const double rlo = s.ratio_range(out.embedding).first;
        Eigen::MatrixXd G = out.embedding * out.embedding.transpose() / (rlo > 0 ? rlo : 1.0);
        for (int it = 0; it < iteration_cap; ++it) {
            ++out.iterations;
            const Eigen::MatrixXd before = G;
            s.sweep(G, aim * aim);
            Embedding X = s.factor(G);
            if (s.distortion(X) <= target) {
                found = std::move(X);
                return true;
            }
            G = X * X.transpose();
            if ((G - before).norm() <= 1e-12 * G.norm()) return false;  // fixed point outside the target box
        }
        capped = true;
        return false;
    };

    while (out.D - out.lower > tol * out.lower) {
        const double mid = 0.5 * (out.lower + out.D);
        Embedding X;
        if (feasible(mid, X)) {
            out.embedding = std::move(X);
            out.D = s.distortion(out.embedding);
        } else {
            out.lower = mid;
        }
    }
    out.converged = !capped;
    return out;
}

Embedding frechet_embedding(const CayleyGraph& g, std::size_t anchors, std::uint64_t seed) {
    if (anchors == 0 || anchors > g.n) throw UsageError("anchor count out of range");
    auto order = seeded_order(g.n, seed);
    Embedding phi(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(anchors));
    const double scale = 1.0 / std::sqrt(static_cast<double>(anchors));
    for (std::size_t a = 0; a < anchors; ++a) {
        const auto dist = bfs_distances(g, order[a]);
        for (std::uint64_t v = 0; v < g.n; ++v)
            phi(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(a)) = scale * dist[v];
    }
    return phi;
}

Embedding normalize_lipschitz(const CayleyGraph& g, Embedding phi) {
    const double L = lipschitz_constant(g, phi);
    if (L > 0) phi /= L;
    return phi;
}

Embedding spectral_embedding(const CayleyGraph& g, const std::vector<double>& eigenvector) {
    if (eigenvector.size() != g.n) throw UsageError("eigenvector length does not match the graph");
    Embedding phi(static_cast<Eigen::Index>(g.n), 1);
    for (std::uint64_t v = 0; v < g.n; ++v) phi(static_cast<Eigen::Index>(v), 0) = eigenvector[v];
    return normalize_lipschitz(g, std::move(phi));
}

void write_profile_csv(std::ostream& out, const DistortionProfile& p) {
    out << "t,rho\n";
    out.precision(17);
    for (std::size_t i = 0; i < p.t.size(); ++i) out << p.t[i] << ',' << p.rho[i] << '\n';
}

void write_embedding(std::ostream& out, const Embedding& phi) {
    out << phi.rows() << ' ' << phi.cols() << '\n';
    out.precision(17);
    for (Eigen::Index i = 0; i < phi.rows(); ++i) {
        for (Eigen::Index j = 0; j < phi.cols(); ++j) out << (j ? " " : "") << phi(i, j);
        out << '\n';
    }
}

Embedding read_embedding(std::istream& in) {
    Eigen::Index n = 0, dim = 0;
    if (!(in >> n >> dim) || n < 0 || dim < 1) throw UsageError("embedding header must be 'n dim'");
    Embedding phi(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            if (!(in >> phi(i, j))) throw UsageError("embedding file is truncated");
    if (!phi.allFinite()) throw DomainError("embedding has non-finite entries");
    return phi;
}

FiniteMetric read_metric(std::istream& in) {
    Eigen::Index n = 0;
    if (!(in >> n) || n < 1) throw UsageError("metric file must start with the point count");
    FiniteMetric m{Eigen::MatrixXd(n, n)};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (!(in >> m.d(i, j))) throw UsageError("metric file is truncated");
    m.validate();
    return m;
}

}  // namespace gdist
