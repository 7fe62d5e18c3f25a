#include "gdist/group.hpp"

#include <numeric>

#include "gdist/errors.hpp"

namespace gdist {

std::string to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * bytes.size());
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 15]);
    }
    return out;
}

const char* universe_name(Universe u) {
    switch (u) {
        case Universe::matrix: return "matrix";
        case Universe::permutation: return "permutation";
        case Universe::direct_product: return "direct-product";
        case Universe::wreath: return "wreath";
        case Universe::grigorchuk_word: return "grigorchuk-word";
    }
    return "?";
}

GroupHandle::GroupHandle(Universe universe, std::string description, Element identity, MulFn mul, InvFn inv)
    : universe_(universe),
      description_(std::move(description)),
      identity_(std::move(identity)),
      mul_(std::move(mul)),
      inv_(std::move(inv)) {}

void GroupHandle::add_generator(std::string name, Element g) {
    if (fixed_width_ && g.code.size() != code_size()) throw UsageError("generator code width does not match the group");
    names_.push_back(std::move(name));
    gens_.push_back(std::move(g));
}

Element GroupHandle::power(const Element& a, long long e) const {
    Element base = e < 0 ? invert(a) : a;
    unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Element result = identity_;
    while (n) {
        if (n & 1) result = multiply(result, base);
        base = multiply(base, base);
        n >>= 1;
    }
    return result;
}

Element GroupHandle::commutator(const Element& a, const Element& b) const {
    return multiply(multiply(invert(a), invert(b)), multiply(a, b));
}

Element GroupHandle::evaluate(std::span<const int> letters) const {
    Element result = identity_;
    for (int l : letters) {
        auto j = static_cast<std::size_t>(l / 2);
        if (l < 0 || j >= gens_.size()) throw UsageError("letter index out of range");
        result = multiply(result, l % 2 ? invert(gens_[j]) : gens_[j]);
    }
    return result;
}

std::string GroupHandle::fingerprint() const {
    std::string s = universe_name(universe_);
    s += '|';
    s += description_;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        s += '|';
        s += names_[i];
        s += '=';
        s += to_hex(gens_[i].code);
    }
    return s;
}

GroupHandle matrix_group(std::uint32_t p, int level, const std::vector<std::pair<std::string, Matrix3>>& gens,
                         std::string description) {
    auto mul = [p, level](const Element& a, const Element& b) {
        return encode(Matrix3::decode(p, level, a.code) * Matrix3::decode(p, level, b.code));
    };
    auto inv = [p, level](const Element& a) { return encode(Matrix3::decode(p, level, a.code).inverse()); };
    GroupHandle h(Universe::matrix, std::move(description), encode(Matrix3::identity(p, level)), mul, inv);
    for (const auto& [name, m] : gens) {
        if (m.modulus() != p || m.level() != level) throw UsageError("generator " + name + " lives over another ring");
        if (m.det() != RingElement::constant(p, level, 1)) throw InvalidElement("generator " + name + " has det != 1");
        h.add_generator(name, encode(m));
    }
    return h;
}

GroupHandle permutation_group(std::size_t degree, const std::vector<std::pair<std::string, Permutation>>& gens,
                              std::string description) {
    auto mul = [](const Element& a, const Element& b) {
        return encode(Permutation::decode(a.code) * Permutation::decode(b.code));
    };
    auto inv = [](const Element& a) { return encode(Permutation::decode(a.code).inverse()); };
    GroupHandle h(Universe::permutation, std::move(description), encode(Permutation(degree)), mul, inv);
    for (const auto& [name, g] : gens) {
        if (g.degree() != degree) throw UsageError("generator " + name + " has the wrong degree");
        h.add_generator(name, encode(g));
    }
    return h;
}

GroupHandle cyclic_group(std::size_t n) {
    std::vector<std::uint16_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint16_t>((i + 1) % n);
    return permutation_group(n, {{"z", Permutation(img)}}, "C" + std::to_string(n));
}

GroupHandle symmetric_group(std::size_t n) {
    if (n < 2) throw UsageError("symmetric group needs degree >= 2");
    std::vector<std::uint16_t> swap(n), cyc(n);
    std::iota(swap.begin(), swap.end(), std::uint16_t{0});
    std::swap(swap[0], swap[1]);
    for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<std::uint16_t>((i + 1) % n);
    return permutation_group(n, {{"s", Permutation(swap)}, {"r", Permutation(cyc)}}, "S" + std::to_string(n));
}

namespace {

std::vector<std::size_t> offsets_of(const std::vector<GroupHandle>& factors) {
    std::vector<std::size_t> off{0};
    for (const auto& f : factors) off.push_back(off.back() + f.code_size());
    return off;
}

}  // namespace

Element product_embed(const std::vector<GroupHandle>& factors, std::size_t slot, const Element& e) {
    std::string code;
    for (std::size_t k = 0; k < factors.size(); ++k) code += (k == slot ? e.code : factors[k].identity().code);
    return {code};
}

Element product_component(const std::vector<GroupHandle>& factors, const Element& e, std::size_t slot) {
    auto off = offsets_of(factors);
    return {e.code.substr(off[slot], off[slot + 1] - off[slot])};
}

GroupHandle direct_product(const std::vector<GroupHandle>& factors) {
    if (factors.empty()) throw UsageError("direct product of nothing");
    auto off = offsets_of(factors);
    auto parts = std::make_shared<std::vector<GroupHandle>>(factors);
    auto split = [off](const Element& e, std::size_t k) {
        return Element{e.code.substr(off[k], off[k + 1] - off[k])};
    };
    auto mul = [parts, split](const Element& a, const Element& b) {
        std::string code;
        for (std::size_t k = 0; k < parts->size(); ++k) code += (*parts)[k].multiply(split(a, k), split(b, k)).code;
        return Element{code};
    };
    auto inv = [parts, split](const Element& a) {
        std::string code;
        for (std::size_t k = 0; k < parts->size(); ++k) code += (*parts)[k].invert(split(a, k)).code;
        return Element{code};
    };
    std::string desc = "(";
    std::string id;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        desc += (k ? " x " : "") + factors[k].description();
        id += factors[k].identity().code;
    }
    desc += ")";
    GroupHandle h(Universe::direct_product, desc, Element{id}, mul, inv);
    for (std::size_t k = 0; k < factors.size(); ++k)
        for (std::size_t j = 0; j < factors[k].generator_count(); ++j)
            h.add_generator(std::to_string(k) + "." + factors[k].generator_names()[j],
                            product_embed(factors, k, factors[k].generators()[j]));
    return h;
}

Element CycleWreath::make(std::span<const Permutation> vals, std::size_t rotation) const {
    if (vals.size() != coords_) throw UsageError("wreath element needs one value per coordinate");
    std::string code;
    code.reserve(coords_ * degree_ * 2 + 2);
    for (const auto& v : vals) {
        if (v.degree() != degree_) throw UsageError("wreath value has the wrong degree");
        v.encode_into(code);
    }
    auto r = static_cast<std::uint16_t>(rotation % coords_);
    code.push_back(static_cast<char>(r & 0xff));
    code.push_back(static_cast<char>(r >> 8));
    return {code};
}

std::vector<Permutation> CycleWreath::values(const Element& e) const {
    std::vector<Permutation> out;
    out.reserve(coords_);
    for (std::size_t x = 0; x < coords_; ++x) out.push_back(Permutation::decode(e.code.data() + 2 * degree_ * x, degree_));
    return out;
}

std::size_t CycleWreath::rotation(const Element& e) const {
    const auto* b = reinterpret_cast<const std::uint8_t*>(e.code.data() + 2 * degree_ * coords_);
    return static_cast<std::size_t>(b[0] | (b[1] << 8));
}

Element CycleWreath::multiply(const Element& a, const Element& b) const {
    auto fa = values(a), fb = values(b);
    std::size_t ra = rotation(a), rb = rotation(b);
    std::vector<Permutation> out;
    out.reserve(coords_);
    for (std::size_t x = 0; x < coords_; ++x) out.push_back(fa[x] * fb[(x + coords_ - ra) % coords_]);
    return make(out, (ra + rb) % coords_);
}

Element CycleWreath::invert(const Element& a) const {
    auto fa = values(a);
    std::size_t ra = rotation(a);
    std::vector<Permutation> out;
    out.reserve(coords_);
    for (std::size_t x = 0; x < coords_; ++x) out.push_back(fa[(x + ra) % coords_].inverse());
    return make(out, (coords_ - ra) % coords_);
}

Element CycleWreath::identity() const {
    std::vector<Permutation> vals(coords_, Permutation(degree_));
    return make(vals, 0);
}

Element CycleWreath::rotation_generator() const {
    std::vector<Permutation> vals(coords_, Permutation(degree_));
    return make(vals, 1);
}

GroupHandle CycleWreath::handle(const std::vector<std::pair<std::string, Element>>& gens, std::string description) const {
    CycleWreath self = *this;
    GroupHandle h(
        Universe::wreath, std::move(description), identity(),
        [self](const Element& a, const Element& b) { return self.multiply(a, b); },
        [self](const Element& a) { return self.invert(a); });
    for (const auto& [name, g] : gens) h.add_generator(name, g);
    return h;
}

}  // namespace gdist
