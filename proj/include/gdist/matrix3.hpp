#pragma once

#include <array>
#include <string>

#include "gdist/ring.hpp"

namespace gdist {

/// 3x3 matrix over F_p[t]/(t^level); row-major, indices 0-based internally.
class Matrix3 {
public:
    Matrix3() = default;
    static Matrix3 zero(std::uint32_t p, int level);
    static Matrix3 identity(std::uint32_t p, int level);

    const RingElement& operator()(int r, int c) const { return e_[static_cast<std::size_t>(3 * r + c)]; }
    RingElement& operator()(int r, int c) { return e_[static_cast<std::size_t>(3 * r + c)]; }

    std::uint32_t modulus() const { return e_[0].modulus(); }
    int level() const { return e_[0].level(); }

    Matrix3 operator*(const Matrix3& o) const;
    RingElement det() const;
    Matrix3 adjugate() const;
    /// Inverse via adjugate; throws InvalidElement unless det == 1.
    Matrix3 inverse() const;
    /// Reduction mod t^level for a smaller level.
    Matrix3 truncate(int level) const;

    bool operator==(const Matrix3& o) const = default;

    std::string encode() const;
    static Matrix3 decode(std::uint32_t p, int level, const std::string& code);
    static std::size_t code_size(int level) { return 9 * static_cast<std::size_t>(level); }

    std::string to_string() const;

private:
    std::array<RingElement, 9> e_{};
};

/// X_{r,c}(P): identity plus P at (r,c); r, c are 1-based and distinct.
Matrix3 elementary_matrix(int r, int c, const RingElement& P);

/// Commutator a^{-1} b^{-1} a b.
Matrix3 commutator(const Matrix3& a, const Matrix3& b);

}  // namespace gdist
