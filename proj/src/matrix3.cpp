#include "gdist/matrix3.hpp"

#include <sstream>

#include "gdist/errors.hpp"

namespace gdist {

Matrix3 Matrix3::zero(std::uint32_t p, int level) {
    Matrix3 m;
    for (auto& x : m.e_) x = RingElement(p, level);
    return m;
}

Matrix3 Matrix3::identity(std::uint32_t p, int level) {
    Matrix3 m = zero(p, level);
    for (int i = 0; i < 3; ++i) m(i, i) = RingElement::constant(p, level, 1);
    return m;
}

Matrix3 Matrix3::operator*(const Matrix3& o) const {
    Matrix3 m = zero(modulus(), level());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            RingElement acc = (*this)(i, 0) * o(0, j);
            acc += (*this)(i, 1) * o(1, j);
            acc += (*this)(i, 2) * o(2, j);
            m(i, j) = acc;
        }
    return m;
}

RingElement Matrix3::det() const {
    const auto& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Matrix3 Matrix3::adjugate() const {
    const auto& m = *this;
    Matrix3 a = zero(modulus(), level());
    auto cof = [&](int r, int c) {
        int r0 = (r + 1) % 3, r1 = (r + 2) % 3, c0 = (c + 1) % 3, c1 = (c + 2) % 3;
        return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    };
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(c, r) = cof(r, c);
    return a;
}

Matrix3 Matrix3::inverse() const {
    if (det() != RingElement::constant(modulus(), level(), 1))
        throw InvalidElement("matrix is not in SL_3: det = " + det().to_string());
    return adjugate();
}

Matrix3 Matrix3::truncate(int lvl) const {
    if (lvl > level()) throw UsageError("cannot truncate to a higher level");
    Matrix3 m;
    for (std::size_t k = 0; k < 9; ++k) {
        std::array<std::int64_t, RingElement::kMaxLevel> c{};
        for (int j = 0; j < lvl; ++j) c[static_cast<std::size_t>(j)] = e_[k].coeff(j);
        m.e_[k] = RingElement::from_coeffs(modulus(), lvl, std::span(c.data(), static_cast<std::size_t>(lvl)));
    }
    return m;
}

std::string Matrix3::encode() const {
    std::string out;
    out.reserve(code_size(level()));
    for (const auto& x : e_) x.encode(out);
    return out;
}

Matrix3 Matrix3::decode(std::uint32_t p, int level, const std::string& code) {
    if (code.size() != code_size(level)) throw UsageError("matrix code has wrong length");
    Matrix3 m;
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(code.data());
    for (std::size_t k = 0; k < 9; ++k) m.e_[k] = RingElement::decode(p, level, bytes + k * static_cast<std::size_t>(level));
    return m;
}

std::string Matrix3::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int r = 0; r < 3; ++r) {
        if (r) os << "; ";
        for (int c = 0; c < 3; ++c) os << (c ? " " : "") << (*this)(r, c).to_string();
    }
    os << ']';
    return os.str();
}

Matrix3 elementary_matrix(int r, int c, const RingElement& P) {
    if (r == c) throw UsageError("elementary matrix needs distinct row and column");
    if (r < 1 || r > 3 || c < 1 || c > 3) throw UsageError("elementary matrix index out of range");
    Matrix3 m = Matrix3::identity(P.modulus(), P.level());
    m(r - 1, c - 1) = P;
    return m;
}

Matrix3 commutator(const Matrix3& a, const Matrix3& b) {
    return a.inverse() * b.inverse() * a * b;
}

}  // namespace gdist
