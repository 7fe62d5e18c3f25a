#include "gdist/grigorchuk.hpp"

#include <algorithm>
#include <memory>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "gdist/errors.hpp"

namespace gdist::grig {

namespace {

bool is_bcd(char c) { return c == 'b' || c == 'c' || c == 'd'; }

// Product in the Klein group {1, b, c, d}.
char klein(char x, char y) {
    if (x == '1') return y;
    if (y == '1') return x;
    if (x == y) return '1';
    for (char z : {'b', 'c', 'd'})
        if (z != x && z != y) return z;
    return '1';
}

void check_letter(char c) {
    if (c != 'a' && !is_bcd(c)) throw UsageError(std::string("not a Grigorchuk generator: ") + c);
}

// Sections of b, c, d along a 0 or 1 bit.
char section(char s, char bit) {
    if (bit == '0') return s == 'd' ? '1' : 'a';
    return s == 'b' ? 'c' : (s == 'c' ? 'd' : 'b');
}

}  // namespace

Word reduce(std::string_view w) {
    Word out;
    for (char c : w) {
        check_letter(c);
        if (!out.empty() && c == 'a' && out.back() == 'a') {
            out.pop_back();
        } else if (!out.empty() && is_bcd(c) && is_bcd(out.back())) {
            const char f = klein(out.back(), c);
            out.pop_back();
            if (f != '1') out.push_back(f);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

Word inverse(std::string_view w) {
    // every generator is an involution
    return Word(w.rbegin(), w.rend());
}

Ray canonical_ray(std::string u) {
    for (char c : u)
        if (c != '0' && c != '1') throw UsageError("ray prefixes are binary strings");
    while (!u.empty() && u.back() == '1') u.pop_back();
    return u;
}

namespace {

// Applies a nucleus letter to the suffix of s starting at position i.
void act_letter_from(char state, std::string& s, std::size_t i) {
    while (state != '1') {
        const char bit = i < s.size() ? s[i] : '1';
        if (state == 'a') {
            if (i >= s.size()) s.resize(i + 1, '1');
            s[i] = bit == '0' ? '1' : '0';
            return;
        }
        // b, c, d along the all-ones tail cycle among themselves and never flip
        if (i >= s.size()) return;
        state = section(state, bit);
        ++i;
    }
}

}  // namespace

Ray act(char letter, const Ray& x) {
    check_letter(letter);
    std::string s = x;
    act_letter_from(letter, s, 0);
    return canonical_ray(std::move(s));
}

Ray act(std::string_view word, Ray x) {
    for (char c : word) x = act(c, x);
    return x;
}

// ---- portraits ----

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    char leaf = 0;  // '1', 'a', 'b', 'c', 'd' or 0 for an inner node
    bool swap = false;
    NodePtr l, r;
};

NodePtr make_leaf(char c) {
    static const NodePtr leaves[5] = {
        std::make_shared<Node>(Node{'1', false, nullptr, nullptr}), std::make_shared<Node>(Node{'a', false, nullptr, nullptr}),
        std::make_shared<Node>(Node{'b', false, nullptr, nullptr}), std::make_shared<Node>(Node{'c', false, nullptr, nullptr}),
        std::make_shared<Node>(Node{'d', false, nullptr, nullptr})};
    switch (c) {
        case '1': return leaves[0];
        case 'a': return leaves[1];
        case 'b': return leaves[2];
        case 'c': return leaves[3];
        case 'd': return leaves[4];
    }
    throw UsageError("bad portrait leaf");
}

struct Split {
    bool swap;
    NodePtr l, r;
};

Split expand(const NodePtr& g) {
    if (!g->leaf) return {g->swap, g->l, g->r};
    switch (g->leaf) {
        case '1': return {false, make_leaf('1'), make_leaf('1')};
        case 'a': return {true, make_leaf('1'), make_leaf('1')};
        case 'b': return {false, make_leaf('a'), make_leaf('c')};
        case 'c': return {false, make_leaf('a'), make_leaf('d')};
        default: return {false, make_leaf('1'), make_leaf('b')};
    }
}

NodePtr normalize(bool swap, NodePtr l, NodePtr r) {
    if (l->leaf && r->leaf) {
        const char x = l->leaf, y = r->leaf;
        if (swap && x == '1' && y == '1') return make_leaf('a');
        if (!swap) {
            if (x == '1' && y == '1') return make_leaf('1');
            if (x == 'a' && y == 'c') return make_leaf('b');
            if (x == 'a' && y == 'd') return make_leaf('c');
            if (x == '1' && y == 'b') return make_leaf('d');
        }
    }
    return std::make_shared<Node>(Node{0, swap, std::move(l), std::move(r)});
}

NodePtr mul(const NodePtr& g, const NodePtr& h) {
    if (g->leaf && h->leaf) {
        if (g->leaf == '1') return h;
        if (h->leaf == '1') return g;
        if (g->leaf == 'a' && h->leaf == 'a') return make_leaf('1');
        if (g->leaf != 'a' && h->leaf != 'a') return make_leaf(klein(g->leaf, h->leaf));
    }
    const Split G = expand(g), H = expand(h);
    auto c0 = mul(G.l, G.swap ? H.r : H.l);
    auto c1 = mul(G.r, G.swap ? H.l : H.r);
    return normalize(G.swap != H.swap, std::move(c0), std::move(c1));
}

NodePtr inv(const NodePtr& g) {
    if (g->leaf) return g;
    return g->swap ? normalize(true, inv(g->r), inv(g->l)) : normalize(false, inv(g->l), inv(g->r));
}

void encode(const NodePtr& g, std::string& out) {
    if (g->leaf) {
        out.push_back(g->leaf);
        return;
    }
    out.push_back(g->swap ? 'S' : 'N');
    encode(g->l, out);
    encode(g->r, out);
}

NodePtr decode(const std::string& code, std::size_t& pos) {
    if (pos >= code.size()) throw UsageError("truncated portrait code");
    const char c = code[pos++];
    if (c == 'N' || c == 'S') {
        auto l = decode(code, pos);
        auto r = decode(code, pos);
        return std::make_shared<Node>(Node{0, c == 'S', std::move(l), std::move(r)});
    }
    return make_leaf(c);
}

NodePtr decode(const std::string& code) {
    std::size_t pos = 0;
    auto g = decode(code, pos);
    if (pos != code.size()) throw UsageError("trailing bytes in portrait code");
    return g;
}

std::string encode(const NodePtr& g) {
    std::string s;
    encode(g, s);
    return s;
}

}  // namespace

std::string portrait(std::string_view word) {
    NodePtr g = make_leaf('1');
    for (char c : word) {
        check_letter(c);
        g = mul(g, make_leaf(c));
    }
    return encode(g);
}

std::string portrait_mul(const std::string& g, const std::string& h) { return encode(mul(decode(g), decode(h))); }

std::string portrait_inv(const std::string& g) { return encode(inv(decode(g))); }

Ray act_portrait(const std::string& code, const Ray& x) {
    NodePtr g = decode(code);
    std::string s = x;
    std::size_t i = 0;
    while (!g->leaf) {
        if (i >= s.size()) s.resize(i + 1, '1');
        const char bit = s[i];
        if (g->swap) s[i] = bit == '0' ? '1' : '0';
        g = bit == '0' ? g->l : g->r;
        ++i;
    }
    act_letter_from(g->leaf, s, i);
    return canonical_ray(std::move(s));
}

int detection_level(std::size_t n) {
    if (n == 0) return 0;
    if (n == 1) return 3;  // d = (1, b) first moves a vertex on level 3
    return 1 + detection_level((n + 1) / 2);
}

std::vector<std::uint32_t> level_action(std::string_view word, int level) {
    if (level < 0 || level > 24) throw UsageError("tree level out of range");
    const std::uint32_t size = 1u << level;
    // per-letter tables; bit p of a vertex index is the symbol at depth p
    std::unordered_map<char, std::vector<std::uint32_t>> tables;
    for (char letter : {'a', 'b', 'c', 'd'}) {
        std::vector<std::uint32_t> t(size);
        for (std::uint32_t v = 0; v < size; ++v) {
            std::uint32_t w = v;
            char state = letter;
            for (int p = 0; p < level && state != '1'; ++p) {
                const char bit = ((v >> p) & 1u) ? '1' : '0';
                if (state == 'a') {
                    w ^= 1u << p;
                    break;
                }
                state = section(state, bit);
            }
            t[v] = w;
        }
        tables.emplace(letter, std::move(t));
    }
    std::vector<std::uint32_t> perm(size);
    for (std::uint32_t v = 0; v < size; ++v) perm[v] = v;
    for (char c : word) {
        check_letter(c);
        const auto& t = tables.at(c);
        for (auto& p : perm) p = t[p];
    }
    return perm;
}

bool equal_by_levels(std::string_view w1, std::string_view w2, int level) {
    return level_action(w1, level) == level_action(w2, level);
}

bool equal_by_contraction(std::string_view w1, std::string_view w2) { return portrait(w1) == portrait(w2); }

bool grig_equal(std::string_view w1, std::string_view w2, int level_budget) {
    std::string quotient(w1);
    quotient += inverse(w2);
    const int need = detection_level(reduce(quotient).size());
    const bool by_contraction = equal_by_contraction(w1, w2);
    const int level = std::min(need, level_budget);
    const bool by_levels = equal_by_levels(w1, w2, level);
    if (!by_levels) {
        if (by_contraction) throw GuaranteeViolation("equality oracles disagree: level action separates equal portraits");
        return false;
    }
    if (level < need)
        throw Undecided("level budget " + std::to_string(level_budget) + " below detection level " +
                        std::to_string(need));
    if (!by_contraction) throw GuaranteeViolation("equality oracles disagree: distinct portraits act equally");
    return true;
}

GroupHandle grigorchuk_group() {
    GroupHandle g(
        Universe::grigorchuk_word, "Grigorchuk group", Element{"1"},
        [](const Element& x, const Element& y) { return Element{portrait_mul(x.code, y.code)}; },
        [](const Element& x) { return Element{portrait_inv(x.code)}; });
    g.set_variable_width();
    for (const char* s : {"a", "b", "c", "d"}) g.add_generator(s, Element{s});
    return g;
}

GrowthFunction grig_growth(int radius, std::uint64_t budget) {
    return word_ball(grigorchuk_group(), radius, budget).growth();
}

WordBall schreier_ball(const Ray& base, int radius) {
    if (radius < 0) throw UsageError("radius must be nonnegative");
    static constexpr char kLetters[4] = {'a', 'b', 'c', 'd'};
    WordBall ball;
    ball.radius = radius;
    ball.degree = 4;
    std::unordered_map<std::string, std::int64_t> index;
    const Ray root = canonical_ray(base);
    ball.codes.push_back(root);
    ball.dist.push_back(0);
    index.emplace(root, 0);
    std::vector<std::array<Ray, 4>> moves;

    std::size_t layer_begin = 0;
    for (int r = 0; r < radius && layer_begin < ball.codes.size(); ++r) {
        const std::size_t layer_end = ball.codes.size();
        std::vector<Ray> next;
        for (std::size_t v = layer_begin; v < layer_end; ++v) {
            std::array<Ray, 4> m;
            for (int l = 0; l < 4; ++l) {
                m[static_cast<std::size_t>(l)] = act(kLetters[l], ball.codes[v]);
                if (!index.count(m[static_cast<std::size_t>(l)])) next.push_back(m[static_cast<std::size_t>(l)]);
            }
            moves.push_back(std::move(m));
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (auto& c : next) {
            index.emplace(c, static_cast<std::int64_t>(ball.codes.size()));
            ball.codes.push_back(std::move(c));
            ball.dist.push_back(r + 1);
        }
        layer_begin = layer_end;
    }
    ball.adj.assign(ball.codes.size() * 4, -1);
    for (std::size_t v = 0; v < moves.size(); ++v)
        for (std::size_t l = 0; l < 4; ++l) ball.adj[v * 4 + l] = index.at(moves[v][l]);
    return ball;
}

void write_schreier_dot(std::ostream& out, const WordBall& ball) {
    static constexpr char kLetters[4] = {'a', 'b', 'c', 'd'};
    auto name = [&](std::size_t v) { return "\"" + ball.codes[v] + "1^inf\""; };
    out << "graph schreier {\n  // base " << name(0) << ", radius " << ball.radius << '\n';
    for (std::size_t v = 0; v < ball.size(); ++v) out << "  " << name(v) << " [dist=" << ball.dist[v] << "];\n";
    for (std::size_t v = 0; v < ball.size(); ++v)
        for (std::size_t l = 0; l < 4; ++l) {
            const auto w = ball.adj[v * 4 + l];
            if (w < 0) continue;
            const auto wu = static_cast<std::size_t>(w);
            const bool w_recorded = ball.adj[wu * 4 + l] >= 0;
            if (w_recorded && wu < v) continue;  // printed from the other end
            out << "  " << name(v) << " -- " << name(wu) << " [label=" << kLetters[l] << "];\n";
        }
    out << "}\n";
}

SequenceProperties check_sequence_properties(int radius, int cap) {
    if (radius < 0 || cap < 0) throw UsageError("radius and cap must be nonnegative");
    SequenceProperties p;
    p.radius = radius;
    p.cap = cap;

    // spreading: x_j must lie outside the radius-(R-1) ball of x_i
    int last_close = -1;
    if (radius > 0)
        for (int i = 0; i < cap; ++i) {
            const auto ball = schreier_ball(ray_x(i), radius - 1);
            std::unordered_set<std::string> inside(ball.codes.begin(), ball.codes.end());
            for (int j = i + 1; j <= cap; ++j)
                if (inside.count(ray_x(j))) last_close = i;
        }
    p.spreading = last_close + 1;

    // stabilizing: isomorphism is an equivalence, so compare with the ball at the cap
    const auto reference = schreier_ball(ray_x(cap), radius);
    int last_diff = -1;
    for (int i = 0; i < cap; ++i)
        if (!labeled_isomorphic(schreier_ball(ray_x(i), radius), reference)) last_diff = i;
    p.stabilizing = last_diff + 1;

    // a witness equal to the cap only compares the last index with itself
    if (cap > 0 && *p.spreading >= cap) p.spreading.reset();
    if (cap > 0 && *p.stabilizing >= cap) p.stabilizing.reset();
    return p;
}

bool rectifier_holds(std::string_view g, const Ray& from, const Ray& to, const std::vector<Ray>& marked) {
    if (act(g, from) != to) return false;
    for (const auto& y : marked) {
        if (y == from) continue;
        const Ray img = act(g, y);
        for (const auto& z : marked)
            if (z != y && img == z) return false;
    }
    return true;
}

std::optional<Word> find_rectifier(const Ray& from, const Ray& to, const std::vector<Ray>& marked, int max_length) {
    const std::string letters = "abcd";
    auto holds = [&](const std::string& code) {
        if (act_portrait(code, from) != to) return false;
        for (const auto& y : marked) {
            if (y == from) continue;
            const Ray img = act_portrait(code, y);
            for (const auto& z : marked)
                if (z != y && img == z) return false;
        }
        return true;
    };
    std::unordered_set<std::string> seen{"1"};
    std::vector<std::pair<std::string, Word>> frontier{{"1", ""}};
    if (holds("1")) return Word{};
    for (int len = 1; len <= max_length && !frontier.empty(); ++len) {
        std::vector<std::pair<std::string, Word>> next;
        for (const auto& [code, word] : frontier)
            for (char c : letters) {
                auto nc = portrait_mul(code, std::string(1, c));
                if (!seen.insert(nc).second) continue;
                Word nw = word + c;
                if (holds(nc)) return nw;
                next.emplace_back(std::move(nc), std::move(nw));
            }
        frontier.swap(next);
    }
    return std::nullopt;
}

std::optional<Word> find_rectifier(int i, int j, const std::vector<int>& marked, int max_length) {
    std::vector<Ray> rays;
    for (int k : marked) rays.push_back(ray_x(k));
    return find_rectifier(ray_x(i), ray_x(j), rays, max_length);
}

}  // namespace gdist::grig
