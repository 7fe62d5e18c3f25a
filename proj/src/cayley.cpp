#include "gdist/cayley.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gdist/errors.hpp"
#include "gdist/hashing.hpp"

namespace gdist {

CayleyGraph bfs_closure(const GroupHandle& group, std::uint64_t budget) {
    if (group.generators().empty()) throw UsageError("bfs_closure needs at least one generator");
    if (budget < 1) throw UsageError("bfs_closure budget must be positive");
    if (!group.fixed_width()) throw UsageError("bfs_closure needs fixed-width element codes; use word_ball");

    std::vector<Element> letters;
    for (const auto& g : group.generators()) {
        letters.push_back(g);
        letters.push_back(group.invert(g));
    }
    const std::size_t deg = letters.size();
    const std::size_t width = group.code_size();

    std::unordered_map<std::string, std::uint64_t> index;
    std::vector<std::string> order{group.identity().code};
    index.emplace(group.identity().code, 0);
    std::string products;  // deg codes per vertex, vertex order

    std::size_t layer_begin = 0;
    while (layer_begin < order.size()) {
        const std::size_t layer_end = order.size();
        std::vector<std::string> next;
        for (std::size_t v = layer_begin; v < layer_end; ++v) {
            const Element cur{order[v]};
            for (const auto& s : letters) {
                Element w = group.multiply(cur, s);
                products += w.code;
                if (!index.count(w.code)) next.push_back(std::move(w.code));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (order.size() + next.size() > budget) {
            order.insert(order.end(), next.begin(), next.end());
            if (order.size() > budget) order.resize(budget);
            throw PartialClosure("group closure exceeds budget of " + std::to_string(budget) + " elements",
                                 std::move(order));
        }
        for (auto& c : next) {
            index.emplace(c, order.size());
            order.push_back(std::move(c));
        }
        layer_begin = layer_end;
    }

    CayleyGraph g;
    g.n = order.size();
    g.degree = static_cast<std::uint16_t>(deg);
    g.gen_count = static_cast<std::uint16_t>(group.generator_count());
    g.code_len = static_cast<std::uint32_t>(width);
    g.transitive = true;
    g.elements.reserve(g.n * width);
    for (const auto& c : order) g.elements += c;
    g.offsets.resize(g.n + 1);
    g.neighbors.resize(g.n * deg);
    g.labels.resize(g.n * deg);
    for (std::uint64_t v = 0; v < g.n; ++v) {
        g.offsets[v] = v * deg;
        for (std::size_t l = 0; l < deg; ++l) {
            g.neighbors[v * deg + l] = index.at(products.substr((v * deg + l) * width, width));
            g.labels[v * deg + l] = static_cast<std::uint16_t>(l);
        }
    }
    g.offsets[g.n] = g.n * deg;
    return g;
}

CayleyGraph graph_from_edges(std::uint64_t n, std::span<const std::pair<std::uint64_t, std::uint64_t>> edges) {
    std::vector<std::vector<std::uint64_t>> adj(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw UsageError("edge endpoint out of range");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    CayleyGraph g;
    g.n = n;
    g.offsets.push_back(0);
    std::size_t maxdeg = 0;
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        maxdeg = std::max(maxdeg, a.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            g.neighbors.push_back(a[k]);
            g.labels.push_back(static_cast<std::uint16_t>(k));
        }
        g.offsets.push_back(g.neighbors.size());
    }
    g.degree = static_cast<std::uint16_t>(maxdeg);
    return g;
}

VertexIndex::VertexIndex(const CayleyGraph& g) {
    map_.reserve(g.n);
    for (std::uint64_t v = 0; v < g.n; ++v) map_.emplace(g.element(v), v);
}

std::optional<std::uint64_t> VertexIndex::find(const Element& e) const {
    auto it = map_.find(e.code);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t VertexIndex::at(const Element& e) const {
    auto v = find(e);
    if (!v) throw DomainError("element " + to_hex(e.code) + " is not a vertex of the graph");
    return *v;
}

std::vector<int> bfs_distances(const CayleyGraph& g, std::uint64_t source) {
    if (source >= g.n) throw UsageError("vertex out of range");
    std::vector<int> dist(g.n, kUnreached);
    std::vector<std::uint64_t> queue;
    queue.reserve(g.n);
    queue.push_back(source);
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto v = queue[head];
        for (auto w : g.adjacent(v))
            if (dist[w] == kUnreached) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

int word_distance(const CayleyGraph& g, std::uint64_t x, std::uint64_t y) {
    if (y >= g.n) throw UsageError("vertex out of range");
    return bfs_distances(g, x)[y];
}

bool is_connected(const CayleyGraph& g) {
    if (g.n == 0) return true;
    auto d = bfs_distances(g, 0);
    return std::none_of(d.begin(), d.end(), [](int x) { return x == kUnreached; });
}

int diameter(const CayleyGraph& g) {
    auto dist = distance_distribution(g);
    return static_cast<int>(dist.size()) - 1;
}

GrowthFunction growth_function(const CayleyGraph& g, int radius) {
    if (radius < 0) throw UsageError("radius must be nonnegative");
    auto d = bfs_distances(g, 0);
    GrowthFunction out;
    out.ball.assign(static_cast<std::size_t>(radius) + 1, 0);
    for (int x : d)
        if (x != kUnreached && x <= radius) ++out.ball[static_cast<std::size_t>(x)];
    for (std::size_t r = 1; r < out.ball.size(); ++r) out.ball[r] += out.ball[r - 1];
    return out;
}

GrowthFunction WordBall::growth() const {
    GrowthFunction out;
    out.ball.assign(static_cast<std::size_t>(radius) + 1, 0);
    for (int x : dist) ++out.ball[static_cast<std::size_t>(x)];
    for (std::size_t r = 1; r < out.ball.size(); ++r) out.ball[r] += out.ball[r - 1];
    return out;
}

WordBall word_ball(const GroupHandle& group, int radius, std::uint64_t budget) {
    if (radius < 0) throw UsageError("radius must be nonnegative");
    if (group.generators().empty()) throw UsageError("word_ball needs at least one generator");
    std::vector<Element> letters;
    for (const auto& g : group.generators()) {
        letters.push_back(g);
        letters.push_back(group.invert(g));
    }
    const std::size_t deg = letters.size();

    WordBall ball;
    ball.radius = radius;
    ball.degree = static_cast<std::uint16_t>(deg);
    std::unordered_map<std::string, std::int64_t> index;
    ball.codes.push_back(group.identity().code);
    ball.dist.push_back(0);
    index.emplace(group.identity().code, 0);
    std::vector<std::string> products;  // deg per vertex

    std::size_t layer_begin = 0;
    for (int r = 0; layer_begin < ball.codes.size(); ++r) {
        const std::size_t layer_end = ball.codes.size();
        std::vector<std::string> next;
        for (std::size_t v = layer_begin; v < layer_end; ++v) {
            const Element cur{ball.codes[v]};
            for (const auto& s : letters) {
                Element w = group.multiply(cur, s);
                if (r < radius && !index.count(w.code)) next.push_back(w.code);
                products.push_back(std::move(w.code));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (ball.codes.size() + next.size() > budget) {
            std::vector<std::string> prefix = ball.codes;
            prefix.insert(prefix.end(), next.begin(), next.end());
            prefix.resize(std::min<std::size_t>(prefix.size(), budget));
            throw PartialClosure("ball of radius " + std::to_string(radius) + " exceeds budget of " +
                                     std::to_string(budget) + " elements",
                                 std::move(prefix));
        }
        for (auto& c : next) {
            index.emplace(c, static_cast<std::int64_t>(ball.codes.size()));
            ball.codes.push_back(std::move(c));
            ball.dist.push_back(r + 1);
        }
        layer_begin = layer_end;
    }
    ball.adj.resize(products.size());
    for (std::size_t k = 0; k < products.size(); ++k) {
        auto it = index.find(products[k]);
        ball.adj[k] = it == index.end() ? -1 : it->second;
    }
    return ball;
}

bool labeled_isomorphic(const WordBall& a, const WordBall& b, std::vector<std::int64_t>* mapping) {
    if (a.size() != b.size() || a.degree != b.degree || a.radius != b.radius) return false;
    const std::size_t deg = a.degree;
    std::vector<std::int64_t> fwd(a.size(), -1), back(b.size(), -1);
    std::vector<std::int64_t> queue{0};
    fwd[0] = 0;
    back[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto v = static_cast<std::size_t>(queue[head]);
        const auto w = static_cast<std::size_t>(fwd[v]);
        for (std::size_t l = 0; l < deg; ++l) {
            const auto x = a.adj[v * deg + l], y = b.adj[w * deg + l];
            if ((x < 0) != (y < 0)) return false;
            if (x < 0) continue;
            const auto xu = static_cast<std::size_t>(x), yu = static_cast<std::size_t>(y);
            if (fwd[xu] < 0) {
                if (back[yu] >= 0) return false;
                fwd[xu] = y;
                back[yu] = x;
                queue.push_back(x);
            } else if (fwd[xu] != y) {
                return false;
            }
        }
    }
    if (queue.size() != a.size()) return false;
    if (mapping) *mapping = std::move(fwd);
    return true;
}

std::vector<std::uint64_t> distance_distribution(const CayleyGraph& g, std::uint64_t pair_budget) {
    std::vector<std::uint64_t> counts;
    auto accumulate = [&](const std::vector<int>& d, std::uint64_t weight) {
        for (int x : d) {
            if (x == kUnreached) throw DomainError("graph is disconnected");
            if (static_cast<std::size_t>(x) >= counts.size()) counts.resize(static_cast<std::size_t>(x) + 1, 0);
            counts[static_cast<std::size_t>(x)] += weight;
        }
    };
    if (g.transitive) {
        accumulate(bfs_distances(g, 0), g.n);
    } else {
        if (g.n * g.n > pair_budget) throw BudgetExceeded("all-pairs distances exceed the pair budget");
        for (std::uint64_t s = 0; s < g.n; ++s) accumulate(bfs_distances(g, s), 1);
    }
    return counts;
}

double far_pair_fraction(std::span<const std::uint64_t> distribution, int t) {
    std::uint64_t total = 0, far = 0;
    for (std::size_t k = 0; k < distribution.size(); ++k) {
        total += distribution[k];
        if (static_cast<int>(k) >= t) far += distribution[k];
    }
    return total ? static_cast<double>(far) / static_cast<double>(total) : 0.0;
}

double far_pair_fraction(const CayleyGraph& g, int t) {
    auto dist = distance_distribution(g);
    return far_pair_fraction(dist, t);
}

void laplacian_apply(const CayleyGraph& g, std::span<const double> x, std::span<double> y) {
    for (std::uint64_t v = 0; v < g.n; ++v) {
        double acc = static_cast<double>(g.offsets[v + 1] - g.offsets[v]) * x[v];
        for (auto w : g.adjacent(v)) acc -= x[w];
        y[v] = acc;
    }
}

namespace {

using Vec = Eigen::VectorXd;

Vec apply_laplacian(const CayleyGraph& g, const Vec& x) {
    Vec y(static_cast<Eigen::Index>(g.n));
    laplacian_apply(g, std::span<const double>(x.data(), g.n), std::span<double>(y.data(), g.n));
    return y;
}

void deflate_constant(Vec& v) { v.array() -= v.mean(); }

}  // namespace

SpectralData spectral_gap(const CayleyGraph& g, double tol, std::uint64_t seed, int iteration_cap) {
    if (tol <= 0) throw UsageError("tolerance must be positive");
    if (g.n < 2) throw DomainError("spectral gap needs at least two vertices");
    if (!is_connected(g)) throw DomainError("spectral gap requires a connected graph");

    const auto n = static_cast<Eigen::Index>(g.n);
    const Eigen::Index basis_cap = std::min<Eigen::Index>(n - 1, 256);
    if (iteration_cap <= 0)
        iteration_cap = std::max(static_cast<int>(50.0 * std::sqrt(static_cast<double>(g.n))), static_cast<int>(basis_cap) * 4);

    std::mt19937_64 rng(seed);
    Vec start(n);
    for (Eigen::Index i = 0; i < n; ++i) start[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    deflate_constant(start);
    start.normalize();

    SpectralData out;
    out.degree = g.degree;
    double best_theta = 0, best_res = std::numeric_limits<double>::infinity();
    int steps = 0;
    Eigen::MatrixXd V(n, basis_cap + 1);

    while (steps < iteration_cap) {
        V.col(0) = start;
        std::vector<double> alpha, beta;
        Eigen::Index m = 0;
        bool invariant = false;
        for (; m < basis_cap && steps < iteration_cap; ++m, ++steps) {
            Vec w = apply_laplacian(g, V.col(m));
            alpha.push_back(V.col(m).dot(w));
            // full reorthogonalization, twice
            for (int pass = 0; pass < 2; ++pass) {
                Vec coeff = V.leftCols(m + 1).transpose() * w;
                w -= V.leftCols(m + 1) * coeff;
                deflate_constant(w);
            }
            double b = w.norm();
            beta.push_back(b);
            if (b < 1e-12 * std::max(1.0, std::abs(alpha.back()))) {
                ++m;
                ++steps;
                invariant = true;
                break;
            }
            V.col(m + 1) = w / b;
        }
        if (m == 0) break;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        double theta = es.eigenvalues()[0];
        Vec y = es.eigenvectors().col(0);
        Vec u = V.leftCols(m) * y;
        deflate_constant(u);
        u.normalize();
        double res = (apply_laplacian(g, u) - theta * u).norm();
        if (res < best_res) {
            best_res = res;
            best_theta = theta;
            out.eigenvector.assign(u.data(), u.data() + n);
        }
        if (res <= tol) {
            out.lambda1 = theta;
            out.residual = res;
            out.iterations = steps;
            return out;
        }
        if (invariant) break;
        start = u;
    }
    throw ConvergenceError("Lanczos did not reach residual " + std::to_string(tol) + " within " +
                               std::to_string(iteration_cap) + " steps",
                           best_theta, best_res);
}

namespace {

template <class T>
void put(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw Error("graph cache truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(in[pos + i])) << (8 * i);
    pos += sizeof(T);
    return static_cast<T>(v);
}

}  // namespace

std::string serialize_graph(const CayleyGraph& g) {
    std::string out = "CAYG";
    put<std::uint16_t>(out, kCacheVersion);
    put<std::uint64_t>(out, g.n);
    put<std::uint16_t>(out, g.degree);
    put<std::uint16_t>(out, g.gen_count);
    put<std::uint32_t>(out, g.code_len);
    out += g.elements;
    for (auto o : g.offsets) put<std::uint64_t>(out, o);
    for (std::size_t k = 0; k < g.neighbors.size(); ++k) {
        put<std::uint64_t>(out, g.neighbors[k]);
        put<std::uint16_t>(out, g.labels[k]);
    }
    put<std::uint32_t>(out, crc32_of(out));
    return out;
}

CayleyGraph deserialize_graph(const std::string& bytes) {
    if (bytes.size() < 4 + 4 || bytes.compare(0, 4, "CAYG") != 0) throw Error("not a CAYG graph cache");
    std::size_t crc_pos = bytes.size() - 4;
    std::size_t p = crc_pos;
    if (get<std::uint32_t>(bytes, p) != crc32_of(std::string_view(bytes).substr(0, crc_pos)))
        throw Error("graph cache CRC mismatch");
    std::size_t pos = 4;
    if (get<std::uint16_t>(bytes, pos) != kCacheVersion) throw Error("unsupported graph cache version");
    CayleyGraph g;
    g.n = get<std::uint64_t>(bytes, pos);
    g.degree = get<std::uint16_t>(bytes, pos);
    g.gen_count = get<std::uint16_t>(bytes, pos);
    g.code_len = get<std::uint32_t>(bytes, pos);
    g.transitive = g.code_len > 0;  // only group closures carry an element table
    const std::size_t table = g.n * g.code_len;
    if (pos + table > crc_pos) throw Error("graph cache truncated");
    g.elements = bytes.substr(pos, table);
    pos += table;
    g.offsets.resize(g.n + 1);
    for (auto& o : g.offsets) o = get<std::uint64_t>(bytes, pos);
    const std::size_t edges = g.offsets.back();
    g.neighbors.resize(edges);
    g.labels.resize(edges);
    for (std::size_t k = 0; k < edges; ++k) {
        g.neighbors[k] = get<std::uint64_t>(bytes, pos);
        g.labels[k] = get<std::uint16_t>(bytes, pos);
    }
    if (pos != crc_pos) throw Error("graph cache has trailing bytes");
    return g;
}

void write_graph_cache(const CayleyGraph& g, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    auto bytes = serialize_graph(g);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("write failed: " + path.string());
}

CayleyGraph read_graph_cache(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return deserialize_graph(ss.str());
}

std::string cache_key(const GroupHandle& group, std::uint64_t budget) {
    return sha256_hex(group.fingerprint() + "|budget=" + std::to_string(budget));
}

CayleyGraph load_or_build(const GroupHandle& group, std::uint64_t budget, const std::filesystem::path& dir) {
    auto path = dir / (cache_key(group, budget) + ".cayg");
    if (std::filesystem::exists(path)) {
        try {
            return read_graph_cache(path);
        } catch (const Error&) {
            // corrupt entry: rebuild below
        }
    }
    CayleyGraph g = bfs_closure(group, budget);
    std::filesystem::create_directories(dir);
    write_graph_cache(g, path);
    return g;
}

}  // namespace gdist
