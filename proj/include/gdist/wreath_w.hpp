#pragma once

/**
 * W = <G, f> inside B^X ⋊ G, where G is the Grigorchuk group acting on the
 * orbit X of 1^∞ and B is a finite product H_1 × ... × H_k × C_N.
 *
 * Law: (f, g)(f', g') = (x -> f(x) f'(x.g), gg'), so the conjugate
 * f^g = g⁻¹ f g is x -> f(x.g⁻¹) and moves supports by g.
 *
 * Points x_i = 0^i 1^∞ are indexed from 0; the flattened lamp list
 * b_0, b_1, ... enumerates t_{1,1}, ..., t_{1,d_1}, t_{2,1}, ... and b_k
 * lives at x_{n(k)}.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdist/cayley.hpp"
#include "gdist/grigorchuk.hpp"
#include "gdist/group.hpp"
#include "gdist/perfect_norm.hpp"

namespace gdist::wreath {

using grig::Ray;

/// Finite-support function X -> B; identity values are never stored.
using SupportedFunction = std::map<Ray, std::string>;

struct WElement {
    SupportedFunction fun;
    std::string g = "1";  // Grigorchuk portrait code

    bool operator==(const WElement&) const = default;
};

/// B^X ⋊ G for a fixed fixed-width lamp group B.
class WreathW {
public:
    explicit WreathW(GroupHandle lamps);

    const GroupHandle& lamps() const { return lamps_; }

    WElement identity() const { return {}; }
    WElement from_word(std::string_view grig_word) const;
    WElement delta(const Ray& x, const Element& value) const;

    WElement multiply(const WElement& u, const WElement& v) const;
    WElement invert(const WElement& u) const;
    /// u^h = h⁻¹ u h
    WElement conjugate(const WElement& u, const WElement& h) const;
    /// u⁻¹ v⁻¹ u v
    WElement commutator(const WElement& u, const WElement& v) const;
    /// Evaluates a word over a, b, c, d and f / F (= f⁻¹).
    WElement evaluate(std::string_view word, const WElement& f) const;

    std::string encode(const WElement& u) const;
    WElement decode(const std::string& code) const;

    /// Variable-width handle with generators a, b, c, d, f.
    GroupHandle handle(const WElement& f, std::string description) const;

private:
    GroupHandle lamps_;
    std::size_t width_;
};

enum class WOp { mul, inv };
WElement w_op(const WreathW& w, WOp op, const WElement& u, const WElement* v = nullptr);

/// A selected finite factor with its generating set T_i, fully enumerated.
struct Factor {
    std::string name;
    GroupHandle group;
    CayleyGraph graph;
};

Factor make_factor(std::string name, const GroupHandle& group, std::uint64_t budget = 1'000'000);

struct NChoice {
    int n = -1;
    int radius = 0;
    int nearest_other = -1;  // exact d(x_n, x_j) minimized over j != n (-1: beyond the search)
    int compared_up_to = 0;  // balls at x_n and x_j equal for n < j <= this index
};

struct PlacementPlan {
    std::vector<Factor> factors;
    std::uint64_t N = 1;
    std::vector<GroupHandle> slots;  // factor groups, then C_N
    GroupHandle lamps{Universe::direct_product, "", Element{}, nullptr, nullptr};
    std::vector<Element> b;                            // flattened, b_k = t_{i,j} z
    std::vector<std::pair<std::size_t, std::size_t>> owner;  // k -> (factor, generator)
    std::vector<std::uint64_t> generator_orders;      // per k, before adjustment
    std::vector<double> eps;                            // per k
    std::vector<int> m;                                 // per placed k
    std::vector<NChoice> n;                             // per placed k
    int index_cap = 64;

    std::size_t lamp_count() const { return b.size(); }
    std::size_t offset(std::size_t factor) const;  // first k of the factor
    std::vector<int> positions() const;             // n(k) for placed k
};

/// ε_k = 1 + 2^{-(k+1)}.
double default_eps(std::size_t k);

/// N = lcm of generator orders, b_k = t_{i,j} z of order N. Throws UsageError on an empty selection.
PlacementPlan configure_plan(std::vector<Factor> factors, int index_cap = 64);

/// Least n > n(k-1) (or >= 0) such that every x_j with j >= n lies at distance >= m from all
/// other x_i, and the labeled m-balls at x_n and x_j agree for n < j <= cap. nullopt when
/// no n < cap qualifies.
std::optional<NChoice> choose_n(const PlacementPlan& plan, std::size_t k, int m);

/// Places lamps 0..count-1 with the radius schedule `m` (one per lamp, nondecreasing).
/// Throws SearchFailure when some index is unresolved within the cap.
void place(PlacementPlan& plan, const std::vector<int>& m);

/// f_k: b_j at x_{n(j)} for j <= k (all placed lamps when k is past the end).
WElement lamp_function(const PlacementPlan& plan, std::size_t k);
WreathW plan_wreath(const PlacementPlan& plan);

struct Coincidence {
    bool holds = false;
    std::uint64_t ball_size_left = 0;
    std::uint64_t ball_size_right = 0;
    std::vector<std::int64_t> mapping;  // left vertex -> right vertex when holds
};

/// Radius-R balls of W_k and W_{k+1} compared under f_k <-> f_{k+1}.
Coincidence verify_ball_coincidence(const PlacementPlan& plan, std::size_t k, int radius,
                                    std::uint64_t budget = 2'000'000);

/// Word g with from.g = to, no other marked point sent to a marked point; tries a
/// Schreier geodesic first, then short group words.
std::optional<grig::Word> rectifier(const Ray& from, const Ray& to, const std::vector<Ray>& marked,
                                    int max_length);

struct CommutatorWitness {
    std::size_t i = 0, j = 0;
    Ray base;
    grig::Word g_i, g_j;
    WElement value;
    Element expected;  // [b_i, b_j] in B
    bool holds = false;
};

/// [f^{g_i}, f^{g_j}] in W_{all placed}; throws SearchFailure when rectifiers are unavailable.
CommutatorWitness commutator_witness(const PlacementPlan& plan, std::size_t i, std::size_t j, const Ray& base,
                                     int max_length = 24);

struct PsiData {
    std::size_t factor = 0;
    Ray base;                      // x_{n(last lamp of the factor)}
    std::vector<grig::Word> g;     // g_j: x_{n(offset+j)} -> base
    int L_prime = 0;
};

/// Rectifiers g_1..g_d for one factor such that every g_j g_{j'}^{-1} only links the
/// factor's own points; throws SearchFailure otherwise.
PsiData psi_rectifiers(const PlacementPlan& plan, std::size_t factor, int max_length = 24);

struct PsiImage {
    WElement value;
    std::vector<int> balanced_word;  // over T_s, symmetrized labels
    std::string w_word;              // over a, b, c, d, f, F after free cancellation
    int perfect_norm = 0;
};

/// Ψ(h) for h in [H_s, H_s]: a shortest balanced word with t_j -> f^{g_j}. Checks that the
/// result is the delta at the base with value h (GuaranteeViolation otherwise).
PsiImage psi_imbed(const PlacementPlan& plan, const PsiData& psi, const Element& h, int perfect_budget = 16);

struct PsiRow {
    std::string element;  // hex
    int perfect_norm = 0;
    int w_lower = 0;      // certified lower bound on ‖Ψ(h)‖_W
    int w_upper = 0;      // length of the constructed word
    bool exact = false;   // w_lower == w_upper from BFS
};

struct Bilipschitz {
    std::vector<PsiRow> rows;
    int L_prime = 0;
    int radius = 0;        // W-ball radius actually enumerated
    bool partial = false;  // stopped by the element budget before `radius` requested
    std::optional<double> K;  // max ‖h‖_perfect / ‖Ψ(h)‖_W (upper estimate)
    std::optional<double> L;  // max ‖Ψ(h)‖_W / ‖h‖_perfect (upper estimate)
    int violations = 0;       // rows certainly outside [1, 2L'+1]
    int undetermined = 0;     // rows whose lower bound is not certified by the ball
};

Bilipschitz measure_bilipschitz(const PlacementPlan& plan, const PsiData& psi, int radius,
                                std::uint64_t budget = 3'000'000, int perfect_budget = 16);

struct GrowthM {
    std::optional<int> m;
    std::vector<std::uint64_t> growth;  // v(0..reached)
    bool partial = false;
};

/// Least m >= 1 with v(m) <= eps^m for W_k (k = -1: f trivial, i.e. G itself).
GrowthM growth_and_m(const PlacementPlan& plan, long k, double eps, int radius_budget,
                     std::uint64_t budget = 3'000'000);

nlohmann::json plan_json(const PlacementPlan& plan, const std::vector<PsiData>& psi = {},
                         const std::vector<Bilipschitz>& measurements = {});

}  // namespace gdist::wreath
