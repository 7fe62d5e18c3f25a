#pragma once

/**
 * H_i = SL3(F_p[t]/(t^i)) with desk-scale spectral certificates.
 *
 * For a 1-Lipschitz Φ into Hilbert space, the Poincaré inequality gives
 * mean_{x,y} ‖Φx − Φy‖² <= d_reg / λ1 = 2C over ordered pairs, so among the
 * pairs at distance >= t (fraction P_t) one lands within
 *   M(t) = sqrt(d_reg / (λ1 P_t)).
 * Any bi-Lipschitz Euclidean embedding therefore has distortion >= t / M(t).
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdist/cayley.hpp"
#include "gdist/group.hpp"

namespace gdist {

enum class GenSet { small, paper_large };

const char* genset_name(GenSet g);
GenSet parse_genset(const std::string& name);

/// (p³−1)(p³−p)(p³−p²)/(p−1) · p^{8(level−1)}.
std::uint64_t sl3_order(std::uint32_t p, int level);

/// small: X_{r,c}(1) for r != c, plus X_{1,2}(t) when level >= 2.
/// paper_large: every matrix of SL3(F_p) plus X_{1,2}(c t), c in F_p^*.
GroupHandle sl3_group(std::uint32_t p, int level, GenSet genset);

struct SL3Instance {
    std::uint32_t p = 2;
    int level = 1;
    GenSet genset = GenSet::small;
    GroupHandle group;
    CayleyGraph graph;
};

/// Full closure, optionally through the CAYG cache. Throws BudgetExceeded when the
/// predicted order or the adjacency size exceeds the budget.
SL3Instance build_sl3(std::uint32_t p, int level, GenSet genset, std::uint64_t budget = 60'000,
                      const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

bool check_perfect(const GroupHandle& group, const CayleyGraph& graph, std::uint64_t budget);

struct SteinbergReport {
    std::uint32_t p = 0;
    int level = 0;
    int trials = 0;
    int configurations = 0;  // ordered (i, j, k) with {i, j, k} = {1, 2, 3}
    std::uint64_t checks = 0;
};

/// Both identities X_ij(P+Q) = X_ij(P) X_ij(Q) and X_ij(PQ) = [X_ik(P), X_kj(Q)] for
/// every ordered (i, j, k); the first failure throws GuaranteeViolation.
SteinbergReport steinberg_check(std::uint32_t p, int level, int trials, std::uint64_t seed);
/// Single pair over all index configurations; false on any mismatch.
bool steinberg_holds(const RingElement& P, const RingElement& Q);

struct CertificateRow {
    int t = 0;
    double P_t = 0;
    double M_t = 0;  // +inf when P_t = 0
};

struct SpectralCertificate {
    std::uint32_t p = 0;
    int level = 0;
    std::string genset;
    std::uint64_t n = 0;
    int d_reg = 0;
    double lambda1 = 0;
    double residual = 0;
    int diameter = 0;
    double C = 0;  // d_reg / (2 λ1)
    std::vector<CertificateRow> table;
    double lower_bound = 0;

    /// M(t) for the least tabulated threshold >= t (the far set only shrinks).
    double M_at(double t) const;
    /// Largest achieved distance t with M(t) <= bound, if any.
    std::optional<int> reach(double bound) const;
};

/// Spectral data, distance distribution and the M(t) table of a connected graph.
SpectralCertificate certificate(const CayleyGraph& graph, double tol, std::uint64_t seed);
/// Same, reusing an already computed spectral gap.
SpectralCertificate certificate(const CayleyGraph& graph, const SpectralData& spec);
SpectralCertificate certificate(const SL3Instance& inst, double tol, std::uint64_t seed);

nlohmann::json certificate_json(const SpectralCertificate& c);
SpectralCertificate certificate_from_json(const nlohmann::json& j);

/// Family constant: max over certificates of min_{t >= diam/2} M(t).
double family_constant(const std::vector<SpectralCertificate>& certs);

}  // namespace gdist
