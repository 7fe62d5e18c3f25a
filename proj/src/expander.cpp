#include "gdist/expander.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gdist/errors.hpp"
#include "gdist/perfect_norm.hpp"

namespace gdist {

const char* genset_name(GenSet g) { return g == GenSet::small ? "small" : "paper-large"; }

GenSet parse_genset(const std::string& name) {
    if (name == "small") return GenSet::small;
    if (name == "paper-large" || name == "paper_large") return GenSet::paper_large;
    throw UsageError("unknown generating set '" + name + "' (expected small or paper-large)");
}

std::uint64_t sl3_order(std::uint32_t p, int level) {
    if (!is_prime(p)) throw UsageError("p must be prime");
    if (level < 1) throw UsageError("level must be at least 1");
    const std::uint64_t q = p, q3 = q * q * q;
    std::uint64_t order = (q3 - 1) * (q3 - q) * (q3 - q * q) / (q - 1);
    for (int i = 1; i < level; ++i)
        for (int k = 0; k < 8; ++k) {
            if (order > std::numeric_limits<std::uint64_t>::max() / q) throw BudgetExceeded("order overflows 64 bits");
            order *= q;
        }
    return order;
}

namespace {

std::vector<std::pair<std::string, Matrix3>> small_generators(std::uint32_t p, int level) {
    std::vector<std::pair<std::string, Matrix3>> gens;
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            if (r != c)
                gens.emplace_back("X" + std::to_string(r) + std::to_string(c),
                                  elementary_matrix(r, c, RingElement::constant(p, level, 1)));
    if (level > 1) gens.emplace_back("X12(t)", elementary_matrix(1, 2, RingElement::monomial(p, level, 1, 1)));
    return gens;
}

// Constant matrix lifted from level 1.
Matrix3 lift(const Matrix3& m, int level) {
    Matrix3 out = Matrix3::zero(m.modulus(), level);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = RingElement::constant(m.modulus(), level, m(r, c).coeff(0));
    return out;
}

}  // namespace

GroupHandle sl3_group(std::uint32_t p, int level, GenSet genset) {
    if (!is_prime(p)) throw UsageError("p must be prime");
    if (level < 1 || level > RingElement::kMaxLevel) throw UsageError("level out of range");
    const std::string desc = "SL3(F" + std::to_string(p) + "[t]/t^" + std::to_string(level) + ") " + genset_name(genset);
    if (genset == GenSet::small) return matrix_group(p, level, small_generators(p, level), desc);

    auto base = matrix_group(p, 1, small_generators(p, 1), "SL3 constants");
    auto closure = bfs_closure(base, sl3_order(p, 1));
    std::vector<std::pair<std::string, Matrix3>> gens;
    for (std::uint64_t v = 1; v < closure.n; ++v)
        gens.emplace_back("A" + std::to_string(v), lift(Matrix3::decode(p, 1, closure.element(v)), level));
    if (level > 1)
        for (std::uint32_t c = 1; c < p; ++c)
            gens.emplace_back("X12(" + std::to_string(c) + "t)",
                              elementary_matrix(1, 2, RingElement::monomial(p, level, c, 1)));
    return matrix_group(p, level, gens, desc);
}

SL3Instance build_sl3(std::uint32_t p, int level, GenSet genset, std::uint64_t budget,
                      const std::optional<std::filesystem::path>& cache_dir) {
    const auto order = sl3_order(p, level);
    if (order > budget)
        throw BudgetExceeded("|SL3(F" + std::to_string(p) + "[t]/t^" + std::to_string(level) + ")| = " +
                             std::to_string(order) + " exceeds the element budget " + std::to_string(budget));
    SL3Instance inst{p, level, genset, sl3_group(p, level, genset), {}};
    const double adjacency = 2.0 * static_cast<double>(inst.group.generator_count()) * static_cast<double>(order);
    if (adjacency > 5e7) throw BudgetExceeded("adjacency of " + std::string(genset_name(genset)) + " Cayley graph too large");
    inst.graph = cache_dir ? load_or_build(inst.group, budget, *cache_dir) : bfs_closure(inst.group, budget);
    if (inst.graph.n != order) throw GuaranteeViolation("closure order disagrees with the order formula");
    return inst;
}

bool check_perfect(const GroupHandle& group, const CayleyGraph& graph, std::uint64_t budget) {
    return derived_subgroup(group, graph, budget).perfect;
}

bool steinberg_holds(const RingElement& P, const RingElement& Q) {
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            const int k = 6 - i - j;
            if (elementary_matrix(i, j, P + Q) != elementary_matrix(i, j, P) * elementary_matrix(i, j, Q)) return false;
            if (elementary_matrix(i, j, P * Q) != commutator(elementary_matrix(i, k, P), elementary_matrix(k, j, Q)))
                return false;
        }
    return true;
}

SteinbergReport steinberg_check(std::uint32_t p, int level, int trials, std::uint64_t seed) {
    if (!is_prime(p)) throw UsageError("p must be prime");
    SteinbergReport rep{p, level, trials, 6, 0};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> coeff(0, p - 1);
    std::vector<std::int64_t> a(static_cast<std::size_t>(level)), b(static_cast<std::size_t>(level));
    for (int t = 0; t < trials; ++t) {
        for (auto& x : a) x = coeff(rng);
        for (auto& x : b) x = coeff(rng);
        const auto P = RingElement::from_coeffs(p, level, a), Q = RingElement::from_coeffs(p, level, b);
        if (!steinberg_holds(P, Q))
            throw GuaranteeViolation("Steinberg identity failed for P = " + P.to_string() + ", Q = " + Q.to_string());
        rep.checks += 12;
    }
    return rep;
}

double SpectralCertificate::M_at(double t) const {
    for (const auto& row : table)
        if (row.t >= t) return row.M_t;
    return std::numeric_limits<double>::infinity();
}

std::optional<int> SpectralCertificate::reach(double bound) const {
    std::optional<int> best;
    for (const auto& row : table)
        if (row.P_t > 0 && row.M_t <= bound) best = row.t;
    return best;
}

SpectralCertificate certificate(const CayleyGraph& graph, double tol, std::uint64_t seed) {
    return certificate(graph, spectral_gap(graph, tol, seed));
}

SpectralCertificate certificate(const CayleyGraph& graph, const SpectralData& spec) {
    const auto dist = distance_distribution(graph);
    SpectralCertificate c;
    c.n = graph.n;
    c.d_reg = graph.degree;
    c.lambda1 = spec.lambda1;
    c.residual = spec.residual;
    c.diameter = static_cast<int>(dist.size()) - 1;
    c.C = c.d_reg / (2 * c.lambda1);
    for (int t = 1; t <= c.diameter; ++t) {
        CertificateRow row;
        row.t = t;
        row.P_t = far_pair_fraction(dist, t);
        row.M_t = row.P_t > 0 ? std::sqrt(c.d_reg / (c.lambda1 * row.P_t)) : std::numeric_limits<double>::infinity();
        if (row.P_t > 0) c.lower_bound = std::max(c.lower_bound, t / row.M_t);
        c.table.push_back(row);
    }
    return c;
}

SpectralCertificate certificate(const SL3Instance& inst, double tol, std::uint64_t seed) {
    auto c = certificate(inst.graph, tol, seed);
    c.p = inst.p;
    c.level = inst.level;
    c.genset = genset_name(inst.genset);
    return c;
}

nlohmann::json certificate_json(const SpectralCertificate& c) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& r : c.table) table.push_back({{"t", r.t}, {"P_t", r.P_t}, {"M_t", r.M_t}});
    return {{"p", c.p},           {"level", c.level},       {"genset", c.genset},       {"n", c.n},
            {"d_reg", c.d_reg},   {"lambda1", c.lambda1},   {"residual", c.residual},   {"diameter", c.diameter},
            {"C", c.C},           {"table", table},         {"lower_bound", c.lower_bound}};
}

SpectralCertificate certificate_from_json(const nlohmann::json& j) {
    SpectralCertificate c;
    c.p = j.at("p").get<std::uint32_t>();
    c.level = j.at("level").get<int>();
    c.genset = j.at("genset").get<std::string>();
    c.n = j.at("n").get<std::uint64_t>();
    c.d_reg = j.at("d_reg").get<int>();
    c.lambda1 = j.at("lambda1").get<double>();
    c.residual = j.at("residual").get<double>();
    c.diameter = j.at("diameter").get<int>();
    c.C = j.value("C", c.d_reg / (2 * c.lambda1));
    for (const auto& r : j.at("table"))
        c.table.push_back({r.at("t").get<int>(), r.at("P_t").get<double>(),
                           r.at("M_t").is_null() ? std::numeric_limits<double>::infinity() : r.at("M_t").get<double>()});
    c.lower_bound = j.at("lower_bound").get<double>();
    return c;
}

double family_constant(const std::vector<SpectralCertificate>& certs) {
    double M = 0;
    for (const auto& c : certs) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& row : c.table)
            if (2 * row.t >= c.diameter && row.P_t > 0) best = std::min(best, row.M_t);
        M = std::max(M, best);
    }
    return M;
}

}  // namespace gdist
