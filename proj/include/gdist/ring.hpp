#pragma once

/**
 * Truncated polynomial ring F_p[t]/(t^level) for a prime p.
 *
 * Elements carry their modulus and level; mixing rings is a usage error.
 * Units are exactly the elements with nonzero constant coefficient.
 */

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace gdist {

class RingElement {
public:
    static constexpr int kMaxLevel = 16;

    RingElement() = default;
    RingElement(std::uint32_t p, int level);

    static RingElement constant(std::uint32_t p, int level, std::int64_t c);
    static RingElement from_coeffs(std::uint32_t p, int level, std::span<const std::int64_t> coeffs);
    /// c * t^k (zero when k >= level).
    static RingElement monomial(std::uint32_t p, int level, std::int64_t c, int k);

    std::uint32_t modulus() const { return p_; }
    int level() const { return level_; }
    std::uint32_t coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }

    bool is_zero() const;
    bool is_unit() const { return c_[0] != 0; }

    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement operator*(const RingElement& o) const;
    RingElement operator-() const;
    RingElement& operator+=(const RingElement& o) { return *this = *this + o; }
    RingElement& operator*=(const RingElement& o) { return *this = *this * o; }

    /// Throws NotInvertible when the constant coefficient is zero.
    RingElement inverse() const;

    bool operator==(const RingElement& o) const = default;

    /// Appends `level` bytes (coefficient t^0 first).
    void encode(std::string& out) const;
    static RingElement decode(std::uint32_t p, int level, const std::uint8_t* bytes);

    std::string to_string() const;

private:
    void check_compatible(const RingElement& o) const;

    std::uint32_t p_ = 0;
    int level_ = 0;
    std::array<std::uint32_t, kMaxLevel> c_{};
};

bool is_prime(std::uint32_t n);
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

}  // namespace gdist
