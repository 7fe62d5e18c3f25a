#pragma once

/**
 * Distortion of maps from finite metric spaces into Euclidean space.
 *
 * ρ_Φ(t) = min over pairs with d(y, y') >= t of ‖Φy − Φy'‖, tabulated at the
 * achieved distances, for Φ normalized to be 1-Lipschitz.
 */

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gdist/cayley.hpp"
#include "gdist/expander.hpp"

namespace gdist {

struct FiniteMetric {
    Eigen::MatrixXd d;

    std::size_t size() const { return static_cast<std::size_t>(d.rows()); }
    /// Symmetry, zero diagonal, positivity off the diagonal, triangle inequality.
    void validate(double tol = 1e-9) const;
    FiniteMetric scaled(double s) const;

    static FiniteMetric from_graph(const CayleyGraph& g);
    static FiniteMetric path(std::size_t n);
    static FiniteMetric uniform(std::size_t n);
};

/// Rows are the images of the points.
using Embedding = Eigen::MatrixXd;

/// max ‖Φx − Φy‖ / d(x, y) over pairs.
double lipschitz_constant(const FiniteMetric& m, const Embedding& phi);
/// Graph metric: the Lipschitz constant is attained on edges.
double lipschitz_constant(const CayleyGraph& g, const Embedding& phi);
/// Bi-Lipschitz distortion max ratio / min ratio (DomainError on collapsed pairs).
double distortion_of(const FiniteMetric& m, const Embedding& phi);

struct DistortionProfile {
    std::vector<double> t;
    std::vector<double> rho;
    double lipschitz = 0;  // of Φ before normalization
    bool sampled = false;  // minima over a subset of pairs: an upper bound on ρ_Φ

    double at(double s) const;  // ρ_Φ(s) with the step-function convention
};

/// Exact profile after dividing Φ by its Lipschitz constant (a zero map gives ρ ≡ 0).
DistortionProfile distortion_profile(const FiniteMetric& m, const Embedding& phi, bool normalize = true);

/// Graph metric without the dense matrix: BFS from `sources` seeded sources (every vertex
/// when 0 or >= n). Lipschitz constant over edges.
DistortionProfile graph_profile(const CayleyGraph& g, const Embedding& phi, std::size_t sources = 0,
                                std::uint64_t seed = 1);

enum class Verdict { better, worse, neither };
const char* verdict_name(Verdict v);

struct ProfileComparison {
    Verdict verdict = Verdict::neither;
    std::optional<double> tail_start;   // first grid threshold of the sign-constant tail
    std::optional<double> better_at;    // a tail threshold with ρ_Φ > ρ
    std::optional<double> worse_at;     // a tail threshold with ρ_Φ < ρ
    double horizon = 0;
    bool finite_horizon = true;         // "for all large t" was judged on a finite grid
};

/// Sign of ρ_Φ − ρ on the grid up to `horizon`; better / worse when the sign is
/// constant on a tail holding at least half of the grid points, neither otherwise.
ProfileComparison compare_profiles(const DistortionProfile& profile, const std::function<double(double)>& rho,
                                   double horizon);

struct PoincareWitness {
    std::uint64_t x = 0, y = 0;
    int distance = 0;
    double image_distance = 0;
    double bound = 0;  // M(t)
    std::uint64_t pairs_scanned = 0;
};

/// A pair with d >= t and ‖Φx − Φy‖ <= M(t) for a 1-Lipschitz Φ. Exhaustive (minimizing)
/// when `exhaustive`, otherwise stops at the first pair within the bound. Throws
/// GuaranteeViolation when no pair qualifies, UsageError when Φ is not 1-Lipschitz.
PoincareWitness poincare_witness(const CayleyGraph& g, const Embedding& phi, const SpectralCertificate& cert, int t,
                                 std::uint64_t seed, bool exhaustive);

/// max over achieved t with P_t > 0 of t / M(t).
double c2_lower_bound(const CayleyGraph& g, double tol = 1e-9, std::uint64_t seed = 1);

struct OptimizeResult {
    Embedding embedding;
    double D = 0;          // distortion of `embedding`, an upper bound on the optimum
    double lower = 1;      // bisection floor reached
    bool converged = false;
    int iterations = 0;
};

/// Bisection on D² over {EDM Δ : d² <= Δ <= D² d²} by alternating projections
/// (PSD clipping of the centered Gram matrix, then entrywise clamping).
OptimizeResult min_distortion_embed(const FiniteMetric& m, std::size_t dim = 0, double tol = 1e-6,
                                    int iteration_cap = 4000, std::uint64_t seed = 1, double lower_hint = 1.0);

/// Φ(x) = (d(x, a))_{a in anchors} / sqrt(k): 1-Lipschitz for any anchor set.
Embedding frechet_embedding(const CayleyGraph& g, std::size_t anchors, std::uint64_t seed);
/// The λ1 eigenvector scaled to be 1-Lipschitz on the graph.
Embedding spectral_embedding(const CayleyGraph& g, const std::vector<double>& eigenvector);
/// Φ scaled down so that its graph Lipschitz constant is exactly 1 (unchanged if 0).
Embedding normalize_lipschitz(const CayleyGraph& g, Embedding phi);

void write_profile_csv(std::ostream& out, const DistortionProfile& p);
void write_embedding(std::ostream& out, const Embedding& phi);
Embedding read_embedding(std::istream& in);
FiniteMetric read_metric(std::istream& in);  // "n" then n rows of distances

}  // namespace gdist
