#include "gdist/derived_imbed.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <ostream>
#include <random>
#include <set>
#include <string_view>

#include "gdist/errors.hpp"
#include "gdist/perfect_norm.hpp"

namespace gdist {

namespace {

// Nontrivial elements of G with their word norms, in vertex order.
std::vector<std::pair<std::uint64_t, int>> syllable_alphabet(const CayleyGraph& g) {
    auto d = bfs_distances(g, 0);
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t v = 1; v < g.n; ++v) out.emplace_back(v, d[v]);
    return out;
}

}  // namespace

std::vector<FreeProductWord> free_product_ball(const CayleyGraph& g, int radius, std::uint64_t count_budget) {
    if (radius < 0) throw UsageError("radius must be nonnegative");
    const auto alphabet = syllable_alphabet(g);
    std::vector<FreeProductWord> out;
    FreeProductWord cur;
    // kind: 0 = empty prefix, 1 = last syllable in G, 2 = last syllable is a power of x
    auto rec = [&](auto&& self, int kind, int remaining) -> void {
        out.push_back(cur);
        if (out.size() > count_budget) throw BudgetExceeded("free-product ball exceeds count budget");
        if (kind != 1)
            for (auto [v, len] : alphabet) {
                if (len > remaining) continue;
                cur.syllables.push_back({false, v, 0});
                cur.length += len;
                self(self, 1, remaining - len);
                cur.length -= len;
                cur.syllables.pop_back();
            }
        if (kind != 2)
            for (int e = 1; e <= remaining; ++e)
                for (int sign : {1, -1}) {
                    cur.syllables.push_back({true, 0, sign * e});
                    cur.length += e;
                    self(self, 2, remaining - e);
                    cur.length -= e;
                    cur.syllables.pop_back();
                }
    };
    rec(rec, 0, radius);
    std::stable_sort(out.begin(), out.end(),
                     [](const FreeProductWord& a, const FreeProductWord& b) { return a.length < b.length; });
    return out;
}

std::vector<Permutation> regular_images(const GroupHandle& group, const CayleyGraph& g, std::size_t degree) {
    if (degree == 0 || degree % g.n != 0) throw UsageError("quotient degree must be a positive multiple of |G|");
    if (degree > 65535) throw UsageError("quotient degree too large");
    VertexIndex idx(g);
    std::vector<Permutation> images;
    images.reserve(g.n);
    for (std::uint64_t h = 0; h < g.n; ++h) {
        const Element eh{g.element(h)};
        std::vector<std::uint16_t> img(degree);
        for (std::uint64_t v = 0; v < g.n; ++v) {
            const auto w = idx.at(group.multiply(Element{g.element(v)}, eh));
            for (std::size_t c = 0; c < degree / g.n; ++c)
                img[c * g.n + v] = static_cast<std::uint16_t>(c * g.n + w);
        }
        images.emplace_back(std::move(img));
    }
    return images;
}

bool injective_on_ball(const CayleyGraph& g, const std::vector<Permutation>& element_images, const Permutation& x,
                       int radius, std::uint64_t budget) {
    const std::size_t k = x.degree();
    const auto alphabet = syllable_alphabet(g);
    // x^e for e in [-radius, radius], stored at index e + radius
    std::vector<Permutation> xpow;
    for (int e = -radius; e <= radius; ++e) xpow.push_back(x.pow(e));

    // Flat arena of images, 16-bit points.
    std::vector<std::uint16_t> arena;
    std::vector<std::uint16_t> prefix(k);
    for (std::size_t i = 0; i < k; ++i) prefix[i] = static_cast<std::uint16_t>(i);
    std::uint64_t count = 0;

    auto rec = [&](auto&& self, int kind, int remaining, const std::vector<std::uint16_t>& p) -> void {
        arena.insert(arena.end(), p.begin(), p.end());
        if (++count > budget) throw BudgetExceeded("injectivity check exceeds ball budget");
        std::vector<std::uint16_t> q(k);
        auto extend = [&](const Permutation& s) {
            for (std::size_t i = 0; i < k; ++i) q[i] = s[p[i]];
        };
        if (kind != 1)
            for (auto [v, len] : alphabet) {
                if (len > remaining) continue;
                extend(element_images[v]);
                self(self, 1, remaining - len, q);
            }
        if (kind != 2)
            for (int e = 1; e <= remaining; ++e)
                for (int sign : {1, -1}) {
                    extend(xpow[static_cast<std::size_t>(sign * e + radius)]);
                    self(self, 2, remaining - e, q);
                }
    };
    rec(rec, 0, radius, prefix);

    const std::size_t bytes = k * sizeof(std::uint16_t);
    auto view = [&](std::uint64_t i) {
        return std::string_view(reinterpret_cast<const char*>(arena.data() + i * k), bytes);
    };
    std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed(count);
    for (std::uint64_t i = 0; i < count; ++i) keyed[i] = {std::hash<std::string_view>{}(view(i)), i};
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < keyed.size(); ++i)
        for (std::size_t j = i + 1; j < keyed.size() && keyed[j].first == keyed[i].first; ++j)
            if (view(keyed[i].second) == view(keyed[j].second)) return false;
    return true;
}

Permutation evaluate_word(const QuotientCandidate& q, const FreeProductWord& w) {
    Permutation p(q.degree);
    for (const auto& s : w.syllables) p = p * (s.is_x ? q.x.pow(s.exp) : q.element_images[s.g]);
    return p;
}

namespace {

double log_factorial(std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

std::uint64_t ball_count(const CayleyGraph& g, int radius) {
    // normal forms ending in a G-syllable / an x-syllable, by exact length
    auto d = bfs_distances(g, 0);
    std::vector<std::uint64_t> by_len(static_cast<std::size_t>(radius) + 1, 0);
    for (std::uint64_t v = 1; v < g.n; ++v)
        if (d[v] <= radius) ++by_len[static_cast<std::size_t>(d[v])];
    std::vector<double> endG(by_len.size(), 0), endX(by_len.size(), 0);
    double total = 1;
    for (std::size_t l = 1; l < by_len.size(); ++l) {
        endG[l] = static_cast<double>(by_len[l]);
        endX[l] = 2;
        for (std::size_t a = 1; a < l; ++a) {
            endG[l] += endX[l - a] * static_cast<double>(by_len[a]);
            endX[l] += endG[l - a] * 2;
        }
        total += endG[l] + endX[l];
    }
    return static_cast<std::uint64_t>(std::min(total, 1e18));
}

Permutation random_permutation(std::size_t k, std::mt19937_64& rng) {
    std::vector<std::uint16_t> img(k);
    for (std::size_t i = 0; i < k; ++i) img[i] = static_cast<std::uint16_t>(i);
    for (std::size_t i = k; i > 1; --i) std::swap(img[i - 1], img[rng() % i]);
    return Permutation(std::move(img));
}

}  // namespace

QuotientCandidate find_ball_faithful_quotient(const GroupHandle& group, const CayleyGraph& g, int m,
                                              const QuotientSearch& search) {
    if (m < 1) throw UsageError("verification radius parameter m must be positive");
    const int radius = 2 * m + 1;
    std::vector<std::size_t> degrees = search.degrees;
    if (degrees.empty())
        for (std::size_t f : {2u, 4u, 8u, 16u}) degrees.push_back(g.n * f);
    const std::uint64_t need = ball_count(g, radius);
    if (need > search.ball_budget)
        throw BudgetExceeded("radius-" + std::to_string(radius) + " ball has " + std::to_string(need) +
                             " normal forms, over budget");

    std::mt19937_64 rng(search.seed);
    int tried = 0;
    for (std::size_t k : degrees) {
        if (log_factorial(k) < std::log(static_cast<double>(need))) continue;  // Sym(k) is too small
        auto images = regular_images(group, g, k);
        for (int attempt = 0; attempt < search.attempts_per_degree; ++attempt, ++tried) {
            auto x = random_permutation(k, rng);
            // cheap radii first: most bad candidates collide early
            bool ok = true;
            for (int r = std::min(radius, 5); ok; r += 2) {
                r = std::min(r, radius);
                ok = injective_on_ball(g, images, x, r, search.ball_budget);
                if (r == radius) break;
            }
            if (!ok) continue;
            QuotientCandidate q;
            q.degree = k;
            q.element_images = images;
            VertexIndex idx(g);
            for (const auto& s : group.generators()) q.generator_images.push_back(images[idx.at(s)]);
            q.x = x;
            q.verified_radius = radius;
            q.ball_size = need;
            q.attempts = tried;
            return q;
        }
    }
    throw SearchFailure("no ball-faithful quotient found in the degree schedule");
}

WreathHost build_wreath_host(const GroupHandle& group, const CayleyGraph& g, const QuotientCandidate& q,
                             std::uint64_t enumeration_budget) {
    const int m = static_cast<int>(g.n);
    const std::size_t coords = 2 * static_cast<std::size_t>(m);
    CycleWreath w(q.degree, coords);
    const Permutation xinv = q.x.inverse();
    auto conj = [&](const Permutation& p) { return xinv * p * q.x; };

    std::vector<std::pair<std::string, Element>> gens;
    for (std::size_t j = 0; j < q.generator_images.size(); ++j) {
        const auto& s = q.generator_images[j];
        std::vector<Permutation> vals;
        for (int i = 0; i < m; ++i) vals.push_back(s.pow(i));
        for (int i = 0; i < m; ++i) vals.push_back(conj(s).pow(i));
        gens.emplace_back("t_" + group.generator_names()[j], w.make(vals, 0));
    }
    gens.emplace_back("r", w.rotation_generator());

    WreathHost host{m, q.degree, w, w.handle(gens, "derived host over degree " + std::to_string(q.degree)), {}, 0,
                    false};
    for (std::uint64_t v = 0; v < g.n; ++v) {
        const auto& p = q.element_images[v];
        std::vector<Permutation> vals(static_cast<std::size_t>(m), p);
        vals.resize(coords, conj(p));
        host.iota.push_back(w.make(vals, 0));
    }

    VertexIndex idx(g);
    const Element r = host.H.generators().back();
    for (std::size_t j = 0; j + 1 < host.H.generator_count(); ++j) {
        const auto s = idx.at(group.generators()[j]);
        if (host.H.commutator(host.H.generators()[j], r) != host.iota[s])
            throw GuaranteeViolation("iota(s) != [t_s, r] for generator " + group.generator_names()[j]);
    }

    try {
        host.order_bound = bfs_closure(host.H, enumeration_budget).n;
        host.fully_enumerated = true;
    } catch (const PartialClosure& e) {
        host.order_bound = e.prefix.size();
    }
    return host;
}

SandwichReport verify_sandwich(const GroupHandle& group, const CayleyGraph& g, const WreathHost& host) {
    SandwichReport rep;
    VertexIndex idx(g);
    rep.homomorphism = true;
    for (std::uint64_t u = 0; u < g.n; ++u)
        for (std::uint64_t v = 0; v < g.n; ++v) {
            const auto uv = idx.at(group.multiply(Element{g.element(u)}, Element{g.element(v)}));
            if (host.H.multiply(host.iota[u], host.iota[v]) != host.iota[uv]) rep.homomorphism = false;
        }
    std::set<std::string> codes;
    for (const auto& e : host.iota) codes.insert(e.code);
    rep.injective = codes.size() == g.n;

    const auto word = bfs_distances(g, 0);
    for (std::uint64_t v = 0; v < g.n; ++v) {
        SandwichRow row;
        row.vertex = v;
        row.word_norm = word[v];
        row.perfect_norm = perfect_norm_search(host.H, host.iota[v], 4 * word[v]);
        row.upper_ok = row.perfect_norm != kUnknownNorm && row.perfect_norm <= 4 * row.word_norm;
        row.lower_ok = row.perfect_norm != kUnknownNorm && 2 * row.word_norm <= row.perfect_norm;
        if (!row.upper_ok)
            throw GuaranteeViolation("perfect norm of iota(g) exceeds 4|g| at vertex " + std::to_string(v));
        if (!row.lower_ok) ++rep.lower_violations;
        rep.rows.push_back(row);
    }
    return rep;
}

void write_sandwich_csv(std::ostream& out, const CayleyGraph& g, const SandwichReport& report) {
    out << "element,word_norm,perfect_norm,lower_ok,upper_ok\n";
    for (const auto& r : report.rows)
        out << to_hex(g.element(r.vertex)) << ',' << r.word_norm << ',' << r.perfect_norm << ','
            << (r.lower_ok ? "true" : "false") << ',' << (r.upper_ok ? "true" : "false") << '\n';
}

nlohmann::json sandwich_summary(const CayleyGraph& g, const QuotientCandidate& q, const WreathHost& host,
                                const SandwichReport& report) {
    nlohmann::json j;
    j["group_order"] = g.n;
    j["m"] = host.m;
    j["quotient_degree"] = q.degree;
    j["verification_radius"] = q.verified_radius;
    j["ball_size"] = q.ball_size;
    j["attempts"] = q.attempts;
    if (host.fully_enumerated)
        j["host_order"] = host.order_bound;
    else
        j["host_order_lower_bound"] = host.order_bound;
    j["homomorphism"] = report.homomorphism;
    j["injective"] = report.injective;
    j["lower_bound_violations"] = report.lower_violations;
    return j;
}

}  // namespace gdist
