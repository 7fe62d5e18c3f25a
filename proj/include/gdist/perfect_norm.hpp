#pragma once

/**
 * Balanced-word ("perfect") norm on derived subgroups.
 *
 * A word over S ∪ S⁻¹ is balanced when every generator occurs as often as its
 * inverse. Balanced words evaluate into [G,G], and the perfect norm of g is
 * the shortest balanced word representing g.
 */

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gdist/cayley.hpp"
#include "gdist/group.hpp"

namespace gdist {

/// Signed letter counts; letters use the symmetrized labels (2j, 2j+1).
std::vector<int> exponent_vector(std::span<const int> letters, std::size_t gen_count);

struct DerivedSubgroup {
    std::vector<std::string> elements;  // sorted canonical codes
    std::uint64_t group_order = 0;
    bool perfect = false;

    bool contains(const std::string& code) const;
    std::size_t size() const { return elements.size(); }
};

/// Normal closure of the generator commutators, which is [G,G]. `graph` must
/// be the full closure of `group`.
DerivedSubgroup derived_subgroup(const GroupHandle& group, const CayleyGraph& graph, std::uint64_t budget);

constexpr int kUnknownNorm = -1;

struct PerfectNormTable {
    int budget = 0;
    std::vector<int> norm;  // per vertex, kUnknownNorm past the budget or outside [G,G]
    std::uint64_t states = 0;
};

/// One pruned BFS over (vertex, exponent vector) states covering every element.
PerfectNormTable perfect_norm_table(const CayleyGraph& graph, int budget);

/// Exact norm of a single vertex. Throws DomainError outside [G,G] and
/// BudgetExceeded when the norm is larger than `budget`.
int perfect_norm(const CayleyGraph& graph, std::uint64_t vertex, int budget, const DerivedSubgroup& derived);

/// A shortest balanced word (symmetrized labels) evaluating to `vertex`.
std::vector<int> perfect_word(const CayleyGraph& graph, std::uint64_t vertex, int budget, const DerivedSubgroup& derived);

/// Meet-in-the-middle variant for groups too large to enumerate. Returns
/// kUnknownNorm when no balanced word of length <= budget reaches `target`.
int perfect_norm_search(const GroupHandle& group, const Element& target, int budget);

/// J = max over generators s of ‖s‖_perfect (throws when one is past the table budget).
int balanced_generator_cost(const CayleyGraph& graph, const PerfectNormTable& table);

/// CSV rows: element-encoding-hex, word_norm, perfect_norm (empty when unknown).
void write_perfect_norm_csv(std::ostream& out, const CayleyGraph& graph, const PerfectNormTable& table);

}  // namespace gdist
