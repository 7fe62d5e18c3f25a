#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace gdist {

/// Permutation of {0,...,k-1} acting on the right: x.(a*b) = (x.a).b.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::size_t degree);  // identity
    explicit Permutation(std::vector<std::uint16_t> images);

    /// Product of disjoint cycles, e.g. from_cycles(3, {{0,1,2}}).
    static Permutation from_cycles(std::size_t degree, std::initializer_list<std::initializer_list<int>> cycles);

    std::size_t degree() const { return img_.size(); }
    std::uint16_t operator()(std::size_t x) const { return img_[x]; }
    std::uint16_t operator[](std::size_t x) const { return img_[x]; }
    const std::vector<std::uint16_t>& images() const { return img_; }

    bool is_identity() const;
    Permutation operator*(const Permutation& o) const;
    Permutation inverse() const;
    Permutation pow(long long e) const;
    std::uint64_t order() const;

    bool operator==(const Permutation& o) const = default;
    auto operator<=>(const Permutation& o) const = default;

    /// Two little-endian bytes per image.
    std::string encode() const;
    void encode_into(std::string& out) const;
    static Permutation decode(const std::string& code);
    static Permutation decode(const char* bytes, std::size_t degree);

    std::string to_string() const;  // cycle notation

private:
    std::vector<std::uint16_t> img_;
};

}  // namespace gdist
