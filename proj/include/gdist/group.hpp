#pragma once

/**
 * Type-erased finite group given by generators.
 *
 * Elements are canonical byte strings (fixed width for most carriers); equality of
 * elements is byte equality. Every carrier (matrix groups, permutation
 * groups, direct products, wreath products over a cycle) produces a
 * GroupHandle so metric code never needs to know the carrier.
 */

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gdist/matrix3.hpp"
#include "gdist/permutation.hpp"

namespace gdist {

struct Element {
    std::string code;

    bool operator==(const Element&) const = default;
    auto operator<=>(const Element&) const = default;
};

struct ElementHash {
    std::size_t operator()(const Element& e) const noexcept { return std::hash<std::string>{}(e.code); }
};

std::string to_hex(const std::string& bytes);

enum class Universe { matrix, permutation, direct_product, wreath, grigorchuk_word };

const char* universe_name(Universe u);

class GroupHandle {
public:
    using MulFn = std::function<Element(const Element&, const Element&)>;
    using InvFn = std::function<Element(const Element&)>;

    GroupHandle(Universe universe, std::string description, Element identity, MulFn mul, InvFn inv);

    void add_generator(std::string name, Element g);

    Universe universe() const { return universe_; }
    const std::string& description() const { return description_; }
    const Element& identity() const { return identity_; }
    /// Byte width of every element code; meaningless when !fixed_width().
    std::size_t code_size() const { return identity_.code.size(); }
    bool fixed_width() const { return fixed_width_; }
    /// Carriers with structured codes (Grigorchuk portraits, wreath supports) opt out.
    void set_variable_width() { fixed_width_ = false; }
    const std::vector<Element>& generators() const { return gens_; }
    const std::vector<std::string>& generator_names() const { return names_; }
    std::size_t generator_count() const { return gens_.size(); }

    Element multiply(const Element& a, const Element& b) const { return mul_(a, b); }
    Element invert(const Element& a) const { return inv_(a); }
    Element power(const Element& a, long long e) const;
    /// a^{-1} b^{-1} a b
    Element commutator(const Element& a, const Element& b) const;
    Element evaluate(std::span<const int> letters) const;  // letter 2j = gen j, 2j+1 = its inverse

    /// Description plus generator encodings; feeds cache keys.
    std::string fingerprint() const;

private:
    Universe universe_;
    std::string description_;
    Element identity_;
    MulFn mul_;
    InvFn inv_;
    std::vector<Element> gens_;
    std::vector<std::string> names_;
    bool fixed_width_ = true;
};

inline Element encode(const Matrix3& m) { return {m.encode()}; }
inline Element encode(const Permutation& p) { return {p.encode()}; }

GroupHandle matrix_group(std::uint32_t p, int level, const std::vector<std::pair<std::string, Matrix3>>& gens,
                         std::string description);
GroupHandle permutation_group(std::size_t degree, const std::vector<std::pair<std::string, Permutation>>& gens,
                              std::string description);
/// C_n generated by the n-cycle "z".
GroupHandle cyclic_group(std::size_t n);
/// S_n generated by s = (0 1) and r = (0 1 ... n-1).
GroupHandle symmetric_group(std::size_t n);

/// Componentwise product; generators are those of each factor placed in its
/// slot, named "<factor index>.<name>".
GroupHandle direct_product(const std::vector<GroupHandle>& factors);
Element product_embed(const std::vector<GroupHandle>& factors, std::size_t slot, const Element& e);
Element product_component(const std::vector<GroupHandle>& factors, const Element& e, std::size_t slot);

/**
 * Q wr C_n for a permutation group Q of degree k: pairs (f, j) with
 * f : {0..n-1} -> Q and j the rotation exponent. The generator r of C_n acts
 * on coordinates by x.r = x - 1 (mod n), and
 *   (f, a)(f', b) = (x -> f(x) f'(x.a), a + b).
 */
class CycleWreath {
public:
    CycleWreath(std::size_t degree, std::size_t coords) : degree_(degree), coords_(coords) {}

    std::size_t degree() const { return degree_; }
    std::size_t coords() const { return coords_; }

    Element make(std::span<const Permutation> values, std::size_t rotation) const;
    std::vector<Permutation> values(const Element& e) const;
    std::size_t rotation(const Element& e) const;

    Element multiply(const Element& a, const Element& b) const;
    Element invert(const Element& a) const;
    Element identity() const;
    Element rotation_generator() const;

    GroupHandle handle(const std::vector<std::pair<std::string, Element>>& gens, std::string description) const;

private:
    std::size_t degree_;
    std::size_t coords_;
};

}  // namespace gdist
