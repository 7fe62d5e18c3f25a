#pragma once

/**
 * Imbedding a finite G = <S> into the derived subgroup of a finite
 * H = <t_s, r> <= Q wr C_{2m}, where Q is a finite quotient of G * Z that is
 * faithful on a ball, and m = |G|.
 */

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "gdist/cayley.hpp"
#include "gdist/group.hpp"

namespace gdist {

/// One syllable of a free-product normal form: either a nontrivial element
/// of G (by vertex index) or a nonzero power of the free generator x.
struct Syllable {
    bool is_x = false;
    std::uint64_t g = 0;
    int exp = 0;
    bool operator==(const Syllable&) const = default;
};

struct FreeProductWord {
    std::vector<Syllable> syllables;
    int length = 0;  // sum of ‖g‖_S and |exp|
    bool operator==(const FreeProductWord&) const = default;
};

/// All normal forms of G * Z with length <= radius, by (length, DFS order).
std::vector<FreeProductWord> free_product_ball(const CayleyGraph& g, int radius, std::uint64_t count_budget);

struct QuotientCandidate {
    std::size_t degree = 0;
    std::vector<Permutation> element_images;  // per vertex of G
    std::vector<Permutation> generator_images;
    Permutation x;
    int verified_radius = 0;
    std::uint64_t ball_size = 0;
    int attempts = 0;  // random x-images tried before this one succeeded
};

struct QuotientSearch {
    std::vector<std::size_t> degrees;  // empty: |G| * {2, 4, 8, 16}
    int attempts_per_degree = 200;
    std::uint64_t seed = 1;
    std::uint64_t ball_budget = 20'000'000;
};

/// k / |G| copies of the right regular representation.
std::vector<Permutation> regular_images(const GroupHandle& group, const CayleyGraph& g, std::size_t degree);

/// Injectivity of the induced map on the radius-R ball, evaluated with
/// running prefix products. Collisions are confirmed byte-for-byte.
bool injective_on_ball(const CayleyGraph& g, const std::vector<Permutation>& element_images, const Permutation& x,
                       int radius, std::uint64_t budget);

/// Evaluation of a single normal form by composing its syllables from scratch.
Permutation evaluate_word(const QuotientCandidate& q, const FreeProductWord& w);

/// Randomized search for Q, faithful on the radius-(2m+1) ball. Throws
/// SearchFailure when every degree in the schedule is exhausted.
QuotientCandidate find_ball_faithful_quotient(const GroupHandle& group, const CayleyGraph& g, int m,
                                              const QuotientSearch& search);

struct WreathHost {
    int m = 0;
    std::size_t degree = 0;
    CycleWreath wreath{1, 1};
    GroupHandle H;
    std::vector<Element> iota;  // per vertex of G
    std::uint64_t order_bound = 0;
    bool fully_enumerated = false;
};

/// Builds t_s, r and ι and checks ι(s) = [t_s, r] (throws GuaranteeViolation otherwise).
WreathHost build_wreath_host(const GroupHandle& group, const CayleyGraph& g, const QuotientCandidate& q,
                             std::uint64_t enumeration_budget);

struct SandwichRow {
    std::uint64_t vertex = 0;
    int word_norm = 0;
    int perfect_norm = -1;  // -1: unknown within budget
    bool lower_ok = false;
    bool upper_ok = false;
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    bool homomorphism = false;
    bool injective = false;
    int lower_violations = 0;
};

/// Exhaustive ι checks plus the per-element sandwich. An upper-bound failure
/// throws GuaranteeViolation; lower-bound failures are counted and reported.
SandwichReport verify_sandwich(const GroupHandle& group, const CayleyGraph& g, const WreathHost& host);

void write_sandwich_csv(std::ostream& out, const CayleyGraph& g, const SandwichReport& report);
nlohmann::json sandwich_summary(const CayleyGraph& g, const QuotientCandidate& q, const WreathHost& host,
                                const SandwichReport& report);

}  // namespace gdist
