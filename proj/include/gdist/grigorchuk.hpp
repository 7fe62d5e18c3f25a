#pragma once

/**
 * The first Grigorchuk group acting on the binary tree, fixed by
 *   a = swap at the root, b = (a, c), c = (a, d), d = (1, b),
 * with the right action (x1 w).g = (x1.σ_g)(w.g|_{x1}).
 *
 * Elements are canonicalized as portraits: a node records the root swap and
 * the two sections, and any subtree equal to a nucleus element 1, a, b, c, d
 * collapses to that letter. Contraction makes the portrait finite, and the
 * collapse rule makes it unique.
 *
 * Points of the orbit X = 1^∞.G are rays u1^∞, stored as the finite prefix u
 * with trailing 1s stripped.
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdist/cayley.hpp"
#include "gdist/group.hpp"

namespace gdist::grig {

using Word = std::string;  // over "abcd"
using Ray = std::string;   // over "01", never ending in '1'

/// Free reduction: drops squares and fuses adjacent {b,c,d} letters.
Word reduce(std::string_view w);
Word inverse(std::string_view w);

Ray canonical_ray(std::string u);
/// x_i = 0^i 1^∞.
inline Ray ray_x(int i) { return Ray(static_cast<std::size_t>(i), '0'); }

Ray act(char letter, const Ray& x);
Ray act(std::string_view word, Ray x);

/// Canonical portrait code of a word.
std::string portrait(std::string_view word);
std::string portrait_mul(const std::string& g, const std::string& h);
std::string portrait_inv(const std::string& g);
/// Action of a portrait-coded element on a ray.
Ray act_portrait(const std::string& g, const Ray& x);
/// Minimal tree level on which a nontrivial element of reduced length n acts nontrivially.
int detection_level(std::size_t n);

/// Permutation of the 2^level vertices of a tree level induced by a word.
std::vector<std::uint32_t> level_action(std::string_view word, int level);

bool equal_by_levels(std::string_view w1, std::string_view w2, int level);
bool equal_by_contraction(std::string_view w1, std::string_view w2);
/// Both oracles must agree; Undecided when the level budget is too small.
bool grig_equal(std::string_view w1, std::string_view w2, int level_budget = 16);

/// GroupHandle over portrait codes (variable width) with generators a, b, c, d.
GroupHandle grigorchuk_group();

GrowthFunction grig_growth(int radius, std::uint64_t budget = 5'000'000);

/// Schreier ball: vertex codes are rays; labels 0..3 = a..d. Only edges
/// leaving vertices at distance < R are recorded, so the radius-0 ball is a
/// bare point.
WordBall schreier_ball(const Ray& base, int radius);
void write_schreier_dot(std::ostream& out, const WordBall& ball);

struct SequenceProperties {
    int radius = 0;
    int cap = 0;
    std::optional<int> spreading;    // least N with d(x_i, x_j) >= R for N <= i < j <= cap
    std::optional<int> stabilizing;  // least N with isomorphic R-balls at x_i for N <= i <= cap
};

SequenceProperties check_sequence_properties(int radius, int cap);

/// Element g with from.g = to and y.g not another marked point for each
/// marked y != from (fixed marked points are allowed). BFS over reduced
/// words up to `max_length`.
std::optional<Word> find_rectifier(const Ray& from, const Ray& to, const std::vector<Ray>& marked, int max_length);
std::optional<Word> find_rectifier(int i, int j, const std::vector<int>& marked, int max_length);
bool rectifier_holds(std::string_view g, const Ray& from, const Ray& to, const std::vector<Ray>& marked);

}  // namespace gdist::grig
