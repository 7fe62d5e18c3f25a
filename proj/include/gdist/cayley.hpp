#pragma once

/**
 * Cayley graphs of finite groups and the metric/spectral views on them.
 *
 * Generators are symmetrized: label 2j is generator j, label 2j+1 its
 * inverse. Involutions therefore contribute two parallel edges, which keeps
 * every Cayley graph regular of degree 2 * (generator count).
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gdist/group.hpp"

namespace gdist {

struct CayleyGraph {
    std::uint64_t n = 0;
    std::uint16_t degree = 0;
    std::uint16_t gen_count = 0;
    std::uint32_t code_len = 0;
    std::string elements;                 // n * code_len bytes; vertex 0 is the identity
    std::vector<std::uint64_t> offsets;   // CSR, n + 1 entries
    std::vector<std::uint64_t> neighbors;
    std::vector<std::uint16_t> labels;
    /// Set for genuine Cayley graphs; enables single-source all-pairs shortcuts.
    bool transitive = false;

    std::string element(std::uint64_t v) const { return elements.substr(v * code_len, code_len); }
    std::span<const std::uint64_t> adjacent(std::uint64_t v) const {
        return {neighbors.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    std::span<const std::uint16_t> adjacent_labels(std::uint64_t v) const {
        return {labels.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    /// v . s for symmetrized label (Cayley graphs store label l at slot l).
    std::uint64_t step(std::uint64_t v, std::uint16_t label) const { return neighbors[offsets[v] + label]; }

    bool operator==(const CayleyGraph&) const = default;
};

/// Enumerates <generators> breadth-first. Vertices are ordered by (BFS
/// layer, canonical encoding). Throws PartialClosure past `budget` elements.
CayleyGraph bfs_closure(const GroupHandle& group, std::uint64_t budget);

/// Plain undirected graph (no element table), labels are slot indices.
CayleyGraph graph_from_edges(std::uint64_t n, std::span<const std::pair<std::uint64_t, std::uint64_t>> edges);

/// Element lookup for a closed graph.
class VertexIndex {
public:
    explicit VertexIndex(const CayleyGraph& g);
    std::optional<std::uint64_t> find(const Element& e) const;
    std::uint64_t at(const Element& e) const;

private:
    std::unordered_map<std::string, std::uint64_t> map_;
};

struct GrowthFunction {
    std::vector<std::uint64_t> ball;  // ball[r] = #{g : |g| <= r}
};

constexpr int kUnreached = -1;

/// Radius-R ball of a possibly infinite group, built by BFS over element
/// codes. adj[v * degree + label] is the neighbor index or -1 when it lies
/// outside the ball.
struct WordBall {
    int radius = 0;
    std::uint16_t degree = 0;
    std::vector<std::string> codes;  // vertex 0 is the identity
    std::vector<int> dist;
    std::vector<std::int64_t> adj;

    std::size_t size() const { return codes.size(); }
    GrowthFunction growth() const;
};

WordBall word_ball(const GroupHandle& group, int radius, std::uint64_t budget);

/// Label- and root-preserving isomorphism of two balls of the same radius
/// and degree. On success `mapping[v]` is the image of vertex v of `a`.
bool labeled_isomorphic(const WordBall& a, const WordBall& b, std::vector<std::int64_t>* mapping = nullptr);

std::vector<int> bfs_distances(const CayleyGraph& g, std::uint64_t source);
int word_distance(const CayleyGraph& g, std::uint64_t x, std::uint64_t y);
bool is_connected(const CayleyGraph& g);
int diameter(const CayleyGraph& g);

GrowthFunction growth_function(const CayleyGraph& g, int radius);

/// counts[k] = number of ordered pairs (x, y) with d(x, y) = k. Uses a single
/// BFS when the graph is transitive, otherwise one BFS per source (bounded by
/// `pair_budget` ordered pairs).
std::vector<std::uint64_t> distance_distribution(const CayleyGraph& g, std::uint64_t pair_budget = 1ull << 34);

/// P_t = #{(x, y) : d(x, y) >= t} / n^2.
double far_pair_fraction(const CayleyGraph& g, int t);
double far_pair_fraction(std::span<const std::uint64_t> distribution, int t);

struct SpectralData {
    double lambda1 = 0;
    int degree = 0;
    double residual = 0;
    int iterations = 0;
    std::vector<double> eigenvector;  // normalized, orthogonal to constants
};

/// Second-smallest eigenvalue of L = d I - A by restarted Lanczos with full
/// reorthogonalization on the complement of the constant vector.
SpectralData spectral_gap(const CayleyGraph& g, double tol, std::uint64_t seed, int iteration_cap = 0);

/// Multiply by the combinatorial Laplacian.
void laplacian_apply(const CayleyGraph& g, std::span<const double> x, std::span<double> y);

// Binary cache: "CAYG" v1, little-endian, trailing CRC32.
constexpr std::uint16_t kCacheVersion = 1;
std::string serialize_graph(const CayleyGraph& g);
CayleyGraph deserialize_graph(const std::string& bytes);
void write_graph_cache(const CayleyGraph& g, const std::filesystem::path& path);
CayleyGraph read_graph_cache(const std::filesystem::path& path);
std::string cache_key(const GroupHandle& group, std::uint64_t budget);
/// Reads <dir>/<key>.cayg when present and valid, otherwise builds and writes it.
CayleyGraph load_or_build(const GroupHandle& group, std::uint64_t budget, const std::filesystem::path& dir);

}  // namespace gdist
