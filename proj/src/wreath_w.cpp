#include "gdist/wreath_w.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "gdist/errors.hpp"

namespace gdist::wreath {

using grig::act;
using grig::act_portrait;
using grig::portrait;
using grig::portrait_inv;
using grig::portrait_mul;
using grig::ray_x;

WreathW::WreathW(GroupHandle lamps) : lamps_(std::move(lamps)), width_(lamps_.code_size()) {
    if (!lamps_.fixed_width()) throw UsageError("lamp group needs fixed-width codes");
}

WElement WreathW::from_word(std::string_view grig_word) const {
    WElement e;
    e.g = portrait(grig_word);
    return e;
}

WElement WreathW::delta(const Ray& x, const Element& value) const {
    WElement e;
    if (value.code.size() != width_) throw UsageError("lamp value has the wrong width");
    if (value != lamps_.identity()) e.fun.emplace(grig::canonical_ray(x), value.code);
    return e;
}

WElement WreathW::multiply(const WElement& u, const WElement& v) const {
    WElement out;
    out.fun = u.fun;
    const std::string g_inv = portrait_inv(u.g);
    for (const auto& [y, val] : v.fun) {
        // (f f')(x) = f(x) f'(x.g): the value f'(y) lands at x = y.g⁻¹
        const Ray x = act_portrait(g_inv, y);
        auto it = out.fun.find(x);
        if (it == out.fun.end()) {
            out.fun.emplace(x, val);
            continue;
        }
        auto prod = lamps_.multiply(Element{it->second}, Element{val});
        if (prod == lamps_.identity())
            out.fun.erase(it);
        else
            it->second = std::move(prod.code);
    }
    out.g = portrait_mul(u.g, v.g);
    return out;
}

WElement WreathW::invert(const WElement& u) const {
    WElement out;
    out.g = portrait_inv(u.g);
    for (const auto& [y, val] : u.fun) out.fun.emplace(act_portrait(u.g, y), lamps_.invert(Element{val}).code);
    return out;
}

WElement WreathW::conjugate(const WElement& u, const WElement& h) const {
    return multiply(multiply(invert(h), u), h);
}

WElement WreathW::commutator(const WElement& u, const WElement& v) const {
    return multiply(multiply(invert(u), invert(v)), multiply(u, v));
}

WElement WreathW::evaluate(std::string_view word, const WElement& f) const {
    WElement out;
    const WElement f_inv = invert(f);
    for (char c : word) {
        if (c == 'f')
            out = multiply(out, f);
        else if (c == 'F')
            out = multiply(out, f_inv);
        else
            out = multiply(out, from_word(std::string_view(&c, 1)));
    }
    return out;
}

// portrait | ray | value ray | value ... ; portraits and rays never contain '|',
// values are exactly width_ bytes.
std::string WreathW::encode(const WElement& u) const {
    std::string s = u.g;
    s += '|';
    for (const auto& [x, val] : u.fun) {
        s += x;
        s += '|';
        s += val;
    }
    return s;
}

WElement WreathW::decode(const std::string& code) const {
    WElement e;
    auto bar = code.find('|');
    if (bar == std::string::npos) throw UsageError("malformed W element code");
    e.g = code.substr(0, bar);
    std::size_t pos = bar + 1;
    while (pos < code.size()) {
        auto sep = code.find('|', pos);
        if (sep == std::string::npos || sep + 1 + width_ > code.size()) throw UsageError("malformed W element code");
        e.fun.emplace(code.substr(pos, sep - pos), code.substr(sep + 1, width_));
        pos = sep + 1 + width_;
    }
    return e;
}

GroupHandle WreathW::handle(const WElement& f, std::string description) const {
    auto self = std::make_shared<WreathW>(*this);
    auto mul = [self](const Element& a, const Element& b) {
        return Element{self->encode(self->multiply(self->decode(a.code), self->decode(b.code)))};
    };
    auto inv = [self](const Element& a) { return Element{self->encode(self->invert(self->decode(a.code)))}; };
    GroupHandle h(Universe::wreath, std::move(description), Element{encode(identity())}, mul, inv);
    h.set_variable_width();
    for (char c : std::string("abcd")) h.add_generator(std::string(1, c), Element{encode(from_word(std::string(1, c)))});
    h.add_generator("f", Element{encode(f)});
    return h;
}

WElement w_op(const WreathW& w, WOp op, const WElement& u, const WElement* v) {
    if (op == WOp::inv) return w.invert(u);
    if (!v) throw UsageError("multiplication needs two operands");
    return w.multiply(u, *v);
}

Factor make_factor(std::string name, const GroupHandle& group, std::uint64_t budget) {
    return Factor{std::move(name), group, bfs_closure(group, budget)};
}

std::size_t PlacementPlan::offset(std::size_t factor) const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < factor; ++i) k += factors[i].group.generator_count();
    return k;
}

std::vector<int> PlacementPlan::positions() const {
    std::vector<int> out;
    for (const auto& c : n) out.push_back(c.n);
    return out;
}

double default_eps(std::size_t k) { return 1.0 + std::ldexp(1.0, -static_cast<int>(k) - 1); }

namespace {

std::uint64_t element_order(const GroupHandle& g, const Element& e, std::uint64_t cap) {
    Element x = e;
    for (std::uint64_t k = 1; k <= cap; ++k) {
        if (x == g.identity()) return k;
        x = g.multiply(x, e);
    }
    throw UsageError("generator order exceeds the group order");
}

bool all_zero(const Ray& r) { return std::all_of(r.begin(), r.end(), [](char c) { return c == '0'; }); }

// Exact distance from x_i to the nearest other x_j, searched up to `limit`.
int nearest_marked(int i, int limit) {
    const Ray root = ray_x(i);
    std::unordered_set<Ray> seen{root};
    std::vector<Ray> frontier{root};
    for (int d = 1; d <= limit && !frontier.empty(); ++d) {
        std::vector<Ray> next;
        for (const auto& r : frontier)
            for (char c : std::string("abcd")) {
                Ray y = act(c, r);
                if (!seen.insert(y).second) continue;
                if (all_zero(y)) return d;
                next.push_back(std::move(y));
            }
        frontier.swap(next);
    }
    return -1;
}

// Shortest Schreier path from `from` to `to` as a word (right action).
std::optional<grig::Word> schreier_geodesic(const Ray& from, const Ray& to, std::size_t node_budget) {
    const Ray a = grig::canonical_ray(from), b = grig::canonical_ray(to);
    if (a == b) return grig::Word{};
    std::unordered_map<Ray, std::pair<Ray, char>> parent;
    parent.emplace(a, std::make_pair(Ray{}, '\0'));
    std::vector<Ray> frontier{a};
    while (!frontier.empty() && parent.size() < node_budget) {
        std::vector<Ray> next;
        for (const auto& r : frontier)
            for (char c : std::string("abcd")) {
                Ray y = act(c, r);
                if (parent.count(y)) continue;
                parent.emplace(y, std::make_pair(r, c));
                if (y == b) {
                    grig::Word w;
                    for (Ray cur = b; cur != a; cur = parent.at(cur).first) w += parent.at(cur).second;
                    std::reverse(w.begin(), w.end());
                    return w;
                }
                next.push_back(std::move(y));
            }
        frontier.swap(next);
    }
    return std::nullopt;
}

// All rectifiers of reduced length <= max_length, shortest first, up to `limit` of them.
std::vector<grig::Word> rectifier_candidates(const Ray& from, const Ray& to, const std::vector<Ray>& marked,
                                             int max_length, std::size_t limit) {
    std::vector<grig::Word> out;
    if (auto geo = schreier_geodesic(from, to, 1u << 20); geo && grig::rectifier_holds(*geo, from, to, marked))
        out.push_back(*geo);
    std::unordered_set<std::string> seen{"1"};
    std::vector<std::pair<std::string, grig::Word>> frontier{{"1", ""}};
    if (grig::rectifier_holds("", from, to, marked) && out.empty()) out.emplace_back();
    for (int len = 1; len <= max_length && !frontier.empty() && out.size() < limit; ++len) {
        std::vector<std::pair<std::string, grig::Word>> next;
        for (const auto& [code, word] : frontier)
            for (char c : std::string("abcd")) {
                auto nc = portrait_mul(code, std::string(1, c));
                if (!seen.insert(nc).second) continue;
                grig::Word nw = word + c;
                if (grig::rectifier_holds(nw, from, to, marked) && std::find(out.begin(), out.end(), nw) == out.end())
                    out.push_back(nw);
                next.emplace_back(std::move(nc), std::move(nw));
            }
        frontier.swap(next);
    }
    if (out.size() > limit) out.resize(limit);
    return out;
}

std::vector<Ray> marked_rays(const PlacementPlan& plan) {
    std::vector<Ray> out;
    for (int n : plan.positions()) out.push_back(ray_x(n));
    return out;
}

// Free cancellation over a, b, c, d (involutions, with bc = d etc.) and f / F.
std::string cancel(const std::string& word, bool f_involution) {
    std::string st;
    auto bcd = [](char c) { return c == 'b' || c == 'c' || c == 'd'; };
    for (char c : word) {
        if (f_involution && c == 'F') c = 'f';
        st.push_back(c);
        while (st.size() >= 2) {
            char x = st[st.size() - 2], y = st.back();
            if (x == y && x != 'f' && x != 'F') {
                st.resize(st.size() - 2);
            } else if (x == y && f_involution) {
                st.resize(st.size() - 2);
            } else if ((x == 'f' && y == 'F') || (x == 'F' && y == 'f')) {
                st.resize(st.size() - 2);
            } else if (bcd(x) && bcd(y)) {
                st.resize(st.size() - 2);
                st.push_back(static_cast<char>('b' + 'c' + 'd' - x - y));
            } else {
                break;
            }
        }
    }
    return st;
}

}  // namespace

PlacementPlan configure_plan(std::vector<Factor> factors, int index_cap) {
    if (factors.empty()) throw UsageError("empty factor selection");
    PlacementPlan plan;
    plan.index_cap = index_cap;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& g = factors[i].group;
        if (g.generator_count() == 0) throw UsageError("factor " + factors[i].name + " has no generators");
        for (std::size_t j = 0; j < g.generator_count(); ++j) {
            auto ord = element_order(g, g.generators()[j], factors[i].graph.n);
            plan.generator_orders.push_back(ord);
            plan.owner.emplace_back(i, j);
            plan.N = std::lcm(plan.N, ord);
        }
    }
    for (const auto& f : factors) plan.slots.push_back(f.group);
    plan.slots.push_back(cyclic_group(plan.N));
    plan.lamps = direct_product(plan.slots);
    const Element z = product_embed(plan.slots, factors.size(), plan.slots.back().generators()[0]);
    for (std::size_t k = 0; k < plan.owner.size(); ++k) {
        const auto [i, j] = plan.owner[k];
        const Element t = product_embed(plan.slots, i, factors[i].group.generators()[j]);
        plan.b.push_back(plan.lamps.multiply(t, z));
        plan.eps.push_back(default_eps(k));
    }
    plan.factors = std::move(factors);
    return plan;
}

std::optional<NChoice> choose_n(const PlacementPlan& plan, std::size_t k, int m) {
    if (m < 0) throw UsageError("radius must be nonnegative");
    if (k > plan.n.size()) throw UsageError("lamps must be placed in order");
    const int cap = plan.index_cap;
    const int prev = k == 0 ? -1 : plan.n[k - 1].n;

    // far[j]: x_j keeps distance >= m from every other x_i (all i, not only i <= cap)
    std::vector<char> far(static_cast<std::size_t>(cap) + 1, 1), iso(static_cast<std::size_t>(cap) + 1, 1);
    if (m > 0)
        for (int j = 0; j <= cap; ++j) {
            const auto ball = grig::schreier_ball(ray_x(j), m - 1);
            for (const auto& r : ball.codes)
                if (all_zero(r) && r != ray_x(j)) far[static_cast<std::size_t>(j)] = 0;
        }
    // labeled-ball isomorphism is an equivalence; compare everything with the cap
    const auto reference = grig::schreier_ball(ray_x(cap), m);
    for (int j = 0; j < cap; ++j)
        iso[static_cast<std::size_t>(j)] = labeled_isomorphic(grig::schreier_ball(ray_x(j), m), reference);

    std::vector<char> suffix_ok(static_cast<std::size_t>(cap) + 2, 1);
    for (int j = cap; j >= 0; --j)
        suffix_ok[static_cast<std::size_t>(j)] =
            suffix_ok[static_cast<std::size_t>(j) + 1] && far[static_cast<std::size_t>(j)] && iso[static_cast<std::size_t>(j)];

    for (int n = prev + 1; n < cap; ++n) {
        if (!suffix_ok[static_cast<std::size_t>(n)]) continue;
        NChoice c;
        c.n = n;
        c.radius = m;
        c.nearest_other = nearest_marked(n, 1 << 12);
        c.compared_up_to = cap;
        return c;
    }
    return std::nullopt;
}

void place(PlacementPlan& plan, const std::vector<int>& m) {
    if (m.size() > plan.lamp_count()) throw UsageError("more radii than lamps");
    plan.m.clear();
    plan.n.clear();
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (k > 0 && m[k] < m[k - 1]) throw UsageError("radius schedule must be nondecreasing");
        auto c = choose_n(plan, k, m[k]);
        if (!c)
            throw SearchFailure("no index below the cap " + std::to_string(plan.index_cap) + " for lamp " +
                                std::to_string(k) + " at radius " + std::to_string(m[k]));
        plan.m.push_back(m[k]);
        plan.n.push_back(*c);
    }
}

WElement lamp_function(const PlacementPlan& plan, std::size_t k) {
    WElement f;
    for (std::size_t j = 0; j < plan.n.size() && j <= k; ++j)
        if (plan.b[j] != plan.lamps.identity()) f.fun.emplace(ray_x(plan.n[j].n), plan.b[j].code);
    return f;
}

WreathW plan_wreath(const PlacementPlan& plan) { return WreathW(plan.lamps); }

Coincidence verify_ball_coincidence(const PlacementPlan& plan, std::size_t k, int radius, std::uint64_t budget) {
    if (k + 1 >= plan.n.size()) throw UsageError("coincidence needs lamps k and k+1 placed");
    const auto w = plan_wreath(plan);
    const auto left = word_ball(w.handle(lamp_function(plan, k), "W_k"), radius, budget);
    const auto right = word_ball(w.handle(lamp_function(plan, k + 1), "W_k+1"), radius, budget);
    Coincidence c;
    c.ball_size_left = left.size();
    c.ball_size_right = right.size();
    c.holds = labeled_isomorphic(left, right, &c.mapping);
    if (!c.holds) c.mapping.clear();
    return c;
}

std::optional<grig::Word> rectifier(const Ray& from, const Ray& to, const std::vector<Ray>& marked,
                                    int max_length) {
    auto c = rectifier_candidates(from, to, marked, max_length, 1);
    if (c.empty()) return std::nullopt;
    return c.front();
}

CommutatorWitness commutator_witness(const PlacementPlan& plan, std::size_t i, std::size_t j, const Ray& base,
                                     int max_length) {
    if (i >= plan.n.size() || j >= plan.n.size()) throw UsageError("lamp index not placed");
    const auto marked = marked_rays(plan);
    const Ray xi = ray_x(plan.n[i].n), xj = ray_x(plan.n[j].n);
    auto h = rectifier(xi, xj, marked, max_length);
    auto gj = rectifier(xj, base, {xj}, max_length);
    if (!h || !gj) throw SearchFailure("rectifier unavailable within length " + std::to_string(max_length));

    CommutatorWitness out;
    out.i = i;
    out.j = j;
    out.base = grig::canonical_ray(base);
    out.g_j = *gj;
    out.g_i = grig::reduce(*h + *gj);
    const auto w = plan_wreath(plan);
    const auto f = lamp_function(plan, plan.n.size());
    out.value = w.commutator(w.conjugate(f, w.from_word(out.g_i)), w.conjugate(f, w.from_word(out.g_j)));
    out.expected = plan.lamps.commutator(plan.b[i], plan.b[j]);
    out.holds = out.value == w.delta(out.base, out.expected);
    return out;
}

PsiData psi_rectifiers(const PlacementPlan& plan, std::size_t factor, int max_length) {
    if (factor >= plan.factors.size()) throw UsageError("factor index out of range");
    const std::size_t off = plan.offset(factor);
    const std::size_t d = plan.factors[factor].group.generator_count();
    if (off + d > plan.n.size()) throw UsageError("factor lamps are not all placed");
    const auto marked = marked_rays(plan);
    auto point = [&](std::size_t j) { return ray_x(plan.n[off + j].n); };

    PsiData psi;
    psi.factor = factor;
    psi.base = point(d - 1);
    std::vector<std::vector<grig::Word>> cand(d);
    cand[d - 1] = {grig::Word{}};
    for (std::size_t j = 0; j + 1 < d; ++j) {
        cand[j] = rectifier_candidates(point(j), psi.base, marked, max_length, 32);
        if (cand[j].empty())
            throw SearchFailure("no rectifier for generator " + std::to_string(j) + " of factor " +
                                plan.factors[factor].name);
    }

    // backtracking over candidate choices, the last g fixed to the identity
    std::vector<grig::Word> chosen(d);
    chosen[d - 1] = "";
    auto compatible = [&](std::size_t j, const grig::Word& gj) {
        for (std::size_t jj = j + 1; jj < d; ++jj)
            if (!grig::rectifier_holds(gj + grig::inverse(chosen[jj]), point(j), point(jj), marked)) return false;
        return true;
    };
    auto search = [&](auto&& self, std::size_t j) -> bool {
        if (j == static_cast<std::size_t>(-1)) return true;
        for (const auto& gj : cand[j]) {
            if (!compatible(j, gj)) continue;
            chosen[j] = gj;
            if (self(self, j - 1)) return true;
        }
        return false;
    };
    if (d >= 2 && !search(search, d - 2))
        throw SearchFailure("no compatible rectifier family for factor " + plan.factors[factor].name);
    psi.g = chosen;
    for (const auto& g : psi.g) psi.L_prime = std::max(psi.L_prime, static_cast<int>(g.size()));
    return psi;
}

PsiImage psi_imbed(const PlacementPlan& plan, const PsiData& psi, const Element& h, int perfect_budget) {
    const auto& fac = plan.factors.at(psi.factor);
    const auto derived = derived_subgroup(fac.group, fac.graph, fac.graph.n);
    const auto v = VertexIndex(fac.graph).at(h);
    PsiImage out;
    out.balanced_word = perfect_word(fac.graph, v, perfect_budget, derived);
    out.perfect_norm = static_cast<int>(out.balanced_word.size());

    std::string raw;
    for (int label : out.balanced_word) {
        const auto& g = psi.g.at(static_cast<std::size_t>(label / 2));
        raw += grig::inverse(g);
        raw += (label % 2 == 0) ? 'f' : 'F';
        raw += g;
    }
    out.w_word = cancel(raw, plan.N <= 2);
    const auto w = plan_wreath(plan);
    const auto f = lamp_function(plan, plan.n.size());
    out.value = w.evaluate(out.w_word, f);
    if (out.value != w.delta(psi.base, product_embed(plan.slots, psi.factor, h)))
        throw GuaranteeViolation("Psi(h) is not the delta at the base point with value h");
    return out;
}

Bilipschitz measure_bilipschitz(const PlacementPlan& plan, const PsiData& psi, int radius, std::uint64_t budget,
                                int perfect_budget) {
    Bilipschitz out;
    out.L_prime = psi.L_prime;
    const auto& fac = plan.factors.at(psi.factor);
    const auto derived = derived_subgroup(fac.group, fac.graph, fac.graph.n);
    const auto w = plan_wreath(plan);
    const auto handle = w.handle(lamp_function(plan, plan.n.size()), "W");

    WordBall ball;
    for (int r = 0; r <= radius; ++r) {
        try {
            ball = word_ball(handle, r, budget);
            out.radius = r;
        } catch (const BudgetExceeded&) {
            out.partial = true;
            break;
        }
    }
    std::unordered_map<std::string, int> dist;
    for (std::size_t v = 0; v < ball.size(); ++v) dist.emplace(ball.codes[v], ball.dist[v]);

    const int envelope = 2 * psi.L_prime + 1;
    for (const auto& code : derived.elements) {
        const Element h{code};
        if (h == fac.group.identity()) continue;
        const auto img = psi_imbed(plan, psi, h, perfect_budget);
        PsiRow row;
        row.element = to_hex(code);
        row.perfect_norm = img.perfect_norm;
        auto it = dist.find(w.encode(img.value));
        row.exact = it != dist.end();
        row.w_lower = row.exact ? it->second : out.radius + 1;
        row.w_upper = row.exact ? it->second : static_cast<int>(img.w_word.size());
        if (row.w_upper < row.perfect_norm || row.w_upper > envelope * row.perfect_norm) ++out.violations;
        else if (row.w_lower < row.perfect_norm) ++out.undetermined;
        const double k = static_cast<double>(row.perfect_norm) / row.w_lower;
        const double l = static_cast<double>(row.w_upper) / row.perfect_norm;
        out.K = std::max(out.K.value_or(0.0), k);
        out.L = std::max(out.L.value_or(0.0), l);
        out.rows.push_back(row);
    }
    return out;
}

GrowthM growth_and_m(const PlacementPlan& plan, long k, double eps, int radius_budget, std::uint64_t budget) {
    const auto w = plan_wreath(plan);
    const WElement f = k < 0 ? w.identity() : lamp_function(plan, static_cast<std::size_t>(k));
    const auto handle = w.handle(f, "W_k");
    GrowthM out;
    out.growth = {1};
    for (int r = 1; r <= radius_budget; ++r) {
        try {
            out.growth = word_ball(handle, r, budget).growth().ball;
        } catch (const BudgetExceeded&) {
            out.partial = true;
            break;
        }
        if (static_cast<double>(out.growth[static_cast<std::size_t>(r)]) <= std::pow(eps, r)) {
            out.m = r;
            break;
        }
    }
    return out;
}

nlohmann::json plan_json(const PlacementPlan& plan, const std::vector<PsiData>& psi,
                         const std::vector<Bilipschitz>& measurements) {
    using nlohmann::json;
    json j;
    j["N"] = plan.N;
    j["index_cap"] = plan.index_cap;
    j["factors"] = json::array();
    for (const auto& f : plan.factors)
        j["factors"].push_back({{"name", f.name}, {"order", f.graph.n}, {"generators", f.group.generator_names()}});
    j["lamps"] = json::array();
    for (std::size_t k = 0; k < plan.lamp_count(); ++k) {
        const auto [i, g] = plan.owner[k];
        json row{{"k", k},
                 {"factor", i},
                 {"generator", plan.factors[i].group.generator_names()[g]},
                 {"generator_order", plan.generator_orders[k]},
                 {"eps", plan.eps[k]}};
        if (k < plan.n.size()) {
            row["m"] = plan.m[k];
            row["n"] = plan.n[k].n;
            row["nearest_other"] = plan.n[k].nearest_other;
            row["balls_compared_up_to"] = plan.n[k].compared_up_to;
        }
        j["lamps"].push_back(row);
    }
    j["psi"] = json::array();
    for (const auto& p : psi)
        j["psi"].push_back({{"factor", p.factor}, {"base", p.base}, {"rectifiers", p.g}, {"L_prime", p.L_prime}});
    j["measurements"] = json::array();
    for (const auto& m : measurements) {
        json rows = json::array();
        for (const auto& r : m.rows)
            rows.push_back({{"element", r.element},
                            {"perfect_norm", r.perfect_norm},
                            {"w_lower", r.w_lower},
                            {"w_upper", r.w_upper},
                            {"exact", r.exact}});
        json mj{{"L_prime", m.L_prime}, {"radius", m.radius},         {"partial", m.partial},
                {"violations", m.violations}, {"undetermined", m.undetermined}, {"rows", rows}};
        mj["K"] = m.K ? json(*m.K) : json(nullptr);
        mj["L"] = m.L ? json(*m.L) : json(nullptr);
        j["measurements"].push_back(mj);
    }
    return j;
}

}  // namespace gdist::wreath
