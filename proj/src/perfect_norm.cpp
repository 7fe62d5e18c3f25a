#include "gdist/perfect_norm.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "gdist/errors.hpp"

namespace gdist {

std::vector<int> exponent_vector(std::span<const int> letters, std::size_t gen_count) {
    std::vector<int> v(gen_count, 0);
    for (int l : letters) {
        if (l < 0 || static_cast<std::size_t>(l) >= 2 * gen_count) throw UsageError("letter out of range");
        v[static_cast<std::size_t>(l / 2)] += (l % 2 == 0) ? 1 : -1;
    }
    return v;
}

bool DerivedSubgroup::contains(const std::string& code) const {
    return std::binary_search(elements.begin(), elements.end(), code);
}

DerivedSubgroup derived_subgroup(const GroupHandle& group, const CayleyGraph& graph, std::uint64_t budget) {
    const auto& gens = group.generators();
    std::vector<Element> inv;
    for (const auto& g : gens) inv.push_back(group.invert(g));

    std::unordered_set<std::string> members{group.identity().code};
    std::vector<std::string> order{group.identity().code};
    std::vector<Element> subgens;

    // Closes the member set after subgens[from_gen..] were appended.
    auto close = [&](std::size_t from_gen) {
        std::size_t head = 0;
        // new generators act on all existing members first
        std::vector<std::string> queue;
        for (const auto& code : order)
            for (std::size_t k = from_gen; k < subgens.size(); ++k) {
                auto w = group.multiply(Element{code}, subgens[k]).code;
                if (members.insert(w).second) queue.push_back(w);
            }
        while (head < queue.size()) {
            const Element cur{queue[head++]};
            for (const auto& h : subgens) {
                auto w = group.multiply(cur, h).code;
                if (members.insert(w).second) queue.push_back(w);
            }
            if (members.size() > budget) throw BudgetExceeded("derived subgroup exceeds budget");
        }
        order.insert(order.end(), queue.begin(), queue.end());
    };
    auto add_generator = [&](const Element& h) {
        if (members.count(h.code)) return false;
        subgens.push_back(h);
        close(subgens.size() - 1);
        return true;
    };

    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) add_generator(group.commutator(gens[i], gens[j]));

    // Normality: every conjugate of a subgroup generator must already be a member.
    for (bool grown = true; grown;) {
        grown = false;
        for (std::size_t k = 0; k < subgens.size(); ++k)
            for (std::size_t s = 0; s < gens.size(); ++s) {
                auto conj = group.multiply(group.multiply(inv[s], subgens[k]), gens[s]);
                grown |= add_generator(conj);
            }
    }

    DerivedSubgroup out;
    out.elements.assign(members.begin(), members.end());
    std::sort(out.elements.begin(), out.elements.end());
    out.group_order = graph.n;
    out.perfect = out.elements.size() == graph.n;
    return out;
}

namespace {

// (vertex, exponent vector) packed into one word: components offset by half
// the budget, vertex index in the high bits.
struct StatePacker {
    std::size_t gens;
    unsigned bits;
    int offset;
    unsigned vertex_shift;

    StatePacker(std::size_t gen_count, int budget, std::uint64_t n) : gens(gen_count) {
        offset = budget / 2 + 1;
        bits = static_cast<unsigned>(std::bit_width(static_cast<unsigned>(2 * offset + 1)));
        vertex_shift = static_cast<unsigned>(gens) * bits;
        if (vertex_shift + std::bit_width(n) > 64) throw UsageError("perfect-norm state does not fit in 64 bits");
    }
    std::uint64_t pack(std::uint64_t v, const std::vector<int>& e) const {
        std::uint64_t key = v << vertex_shift;
        for (std::size_t j = 0; j < gens; ++j)
            key |= static_cast<std::uint64_t>(e[j] + offset) << (j * bits);
        return key;
    }
    std::uint64_t vertex(std::uint64_t key) const { return key >> vertex_shift; }
    void unpack(std::uint64_t key, std::vector<int>& e) const {
        const std::uint64_t mask = (1ull << bits) - 1;
        for (std::size_t j = 0; j < gens; ++j) e[j] = static_cast<int>((key >> (j * bits)) & mask) - offset;
    }
    bool balanced(std::uint64_t key) const {
        std::uint64_t zero = 0;
        for (std::size_t j = 0; j < gens; ++j) zero |= static_cast<std::uint64_t>(offset) << (j * bits);
        return (key & ((1ull << vertex_shift) - 1)) == zero;
    }
};

// Layered BFS; visit(vertex, depth) fires on the first balanced arrival and
// returns true to stop the search.
template <class Visit>
std::uint64_t balanced_bfs(const CayleyGraph& graph, int budget, Visit visit) {
    if (budget < 0) throw UsageError("budget must be nonnegative");
    if (graph.gen_count == 0) throw UsageError("perfect norm needs a labeled Cayley graph");
    const std::size_t k = graph.gen_count;
    StatePacker pk(k, budget, graph.n);
    std::vector<std::uint64_t> visited, frontier{pk.pack(0, std::vector<int>(k, 0))};
    visited = frontier;
    if (visit(0, 0)) return 1;
    std::vector<int> e(k);
    for (int depth = 1; depth <= budget && !frontier.empty(); ++depth) {
        std::vector<std::uint64_t> next;
        for (auto key : frontier) {
            const auto v = pk.vertex(key);
            pk.unpack(key, e);
            int l1 = 0;
            for (int x : e) l1 += std::abs(x);
            for (std::uint16_t label = 0; label < 2 * k; ++label) {
                const std::size_t j = label / 2;
                const int delta = (label % 2 == 0) ? 1 : -1;
                const int l1_next = l1 - std::abs(e[j]) + std::abs(e[j] + delta);
                if (l1_next > budget - depth) continue;  // cannot rebalance in time
                e[j] += delta;
                next.push_back(pk.pack(graph.step(v, label), e));
                e[j] -= delta;
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        std::vector<std::uint64_t> fresh;
        std::set_difference(next.begin(), next.end(), visited.begin(), visited.end(), std::back_inserter(fresh));
        std::vector<std::uint64_t> merged;
        merged.reserve(visited.size() + fresh.size());
        std::merge(visited.begin(), visited.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
        visited.swap(merged);
        for (auto key : fresh)
            if (pk.balanced(key) && visit(pk.vertex(key), depth)) return visited.size();
        frontier.swap(fresh);
    }
    return visited.size();
}

}  // namespace

PerfectNormTable perfect_norm_table(const CayleyGraph& graph, int budget) {
    PerfectNormTable t;
    t.budget = budget;
    t.norm.assign(graph.n, kUnknownNorm);
    t.states = balanced_bfs(graph, budget, [&](std::uint64_t v, int depth) {
        if (t.norm[v] == kUnknownNorm) t.norm[v] = depth;
        return false;
    });
    return t;
}

int perfect_norm(const CayleyGraph& graph, std::uint64_t vertex, int budget, const DerivedSubgroup& derived) {
    if (vertex >= graph.n) throw UsageError("vertex out of range");
    if (!derived.contains(graph.element(vertex))) throw DomainError("element is not in the derived subgroup");
    int found = kUnknownNorm;
    balanced_bfs(graph, budget, [&](std::uint64_t v, int depth) {
        if (v != vertex) return false;
        found = depth;
        return true;
    });
    if (found == kUnknownNorm)
        throw BudgetExceeded("perfect norm exceeds budget " + std::to_string(budget));
    return found;
}

std::vector<int> perfect_word(const CayleyGraph& graph, std::uint64_t vertex, int budget,
                              const DerivedSubgroup& derived) {
    const int len = perfect_norm(graph, vertex, budget, derived);
    const std::size_t k = graph.gen_count;
    const auto to_target = bfs_distances(graph, vertex);
    StatePacker pk(k, budget, graph.n);
    std::set<std::pair<std::uint64_t, int>> dead;  // (state, remaining) pairs known to fail
    std::vector<int> word, e(k, 0);

    auto dfs = [&](auto&& self, std::uint64_t v, int remaining) -> bool {
        int l1 = 0;
        for (int x : e) l1 += std::abs(x);
        if (l1 > remaining || to_target[v] > remaining) return false;
        if (remaining == 0) return v == vertex && l1 == 0;
        const std::pair<std::uint64_t, int> memo{pk.pack(v, e), remaining};
        if (dead.count(memo)) return false;
        for (std::uint16_t label = 0; label < 2 * k; ++label) {
            const std::size_t j = label / 2;
            const int delta = (label % 2 == 0) ? 1 : -1;
            e[j] += delta;
            word.push_back(label);
            if (self(self, graph.step(v, label), remaining - 1)) return true;
            word.pop_back();
            e[j] -= delta;
        }
        dead.insert(memo);
        return false;
    };
    if (!dfs(dfs, 0, len)) throw GuaranteeViolation("balanced word reconstruction failed");
    return word;
}

int perfect_norm_search(const GroupHandle& group, const Element& target, int budget) {
    if (budget < 0) throw UsageError("budget must be nonnegative");
    const std::size_t k = group.generator_count();
    std::vector<Element> letters;
    for (const auto& g : group.generators()) {
        letters.push_back(g);
        letters.push_back(group.invert(g));
    }
    const int half_cap = budget / 2 + (budget % 2);
    auto key = [](const std::string& code, const std::vector<int>& e) {
        std::string s = code;
        for (int x : e) s.push_back(static_cast<char>(static_cast<signed char>(x)));
        return s;
    };
    if (budget / 2 + 1 > 127) throw UsageError("budget too large for the meet-in-the-middle search");

    // layers[a] = states reachable by words of length exactly a
    struct State {
        Element g;
        std::vector<int> e;
    };
    std::vector<std::vector<State>> layers{{State{group.identity(), std::vector<int>(k, 0)}}};
    std::vector<std::unordered_set<std::string>> keys{{key(group.identity().code, layers[0][0].e)}};
    for (int a = 1; a <= half_cap; ++a) {
        std::vector<State> next;
        std::unordered_set<std::string> seen;
        for (const auto& st : layers.back())
            for (std::size_t l = 0; l < letters.size(); ++l) {
                State n{group.multiply(st.g, letters[l]), st.e};
                n.e[l / 2] += (l % 2 == 0) ? 1 : -1;
                int l1 = 0;
                for (int x : n.e) l1 += std::abs(x);
                if (l1 > budget / 2) continue;  // the other half is too short to cancel it
                auto kk = key(n.g.code, n.e);
                if (seen.insert(kk).second) next.push_back(std::move(n));
            }
        layers.push_back(std::move(next));
        keys.push_back(std::move(seen));
    }
    for (int len = 0; len <= budget; ++len) {
        const auto a = static_cast<std::size_t>(len / 2 + len % 2), b = static_cast<std::size_t>(len / 2);
        for (const auto& st : layers[a]) {
            std::vector<int> neg(k);
            for (std::size_t j = 0; j < k; ++j) neg[j] = -st.e[j];
            auto rest = group.multiply(group.invert(st.g), target);
            if (keys[b].count(key(rest.code, neg))) return len;
        }
    }
    return kUnknownNorm;
}

int balanced_generator_cost(const CayleyGraph& graph, const PerfectNormTable& table) {
    int j = 0;
    for (std::uint16_t label = 0; label < 2 * graph.gen_count; label += 2) {
        const int n = table.norm[graph.step(0, label)];
        if (n == kUnknownNorm)
            throw BudgetExceeded("a generator has no balanced word within budget " + std::to_string(table.budget));
        j = std::max(j, n);
    }
    return j;
}

void write_perfect_norm_csv(std::ostream& out, const CayleyGraph& graph, const PerfectNormTable& table) {
    const auto word = bfs_distances(graph, 0);
    out << "element,word_norm,perfect_norm\n";
    for (std::uint64_t v = 0; v < graph.n; ++v) {
        out << to_hex(graph.element(v)) << ',' << word[v] << ',';
        if (table.norm[v] != kUnknownNorm) out << table.norm[v];
        out << '\n';
    }
}

}  // namespace gdist
