#include "gdist/ring.hpp"

#include <sstream>

#include "gdist/errors.hpp"

namespace gdist {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
    if (a % p == 0) throw NotInvertible("zero has no inverse mod " + std::to_string(p));
    std::uint64_t result = 1, base = a % p;
    std::uint64_t e = p - 2;
    while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

RingElement::RingElement(std::uint32_t p, int level) : p_(p), level_(level) {
    if (!is_prime(p)) throw UsageError("ring modulus must be prime, got " + std::to_string(p));
    if (p > 255) throw UsageError("ring modulus must fit in one byte");
    if (level < 1 || level > kMaxLevel) throw UsageError("ring level out of range");
}

RingElement RingElement::constant(std::uint32_t p, int level, std::int64_t c) {
    return monomial(p, level, c, 0);
}

RingElement RingElement::monomial(std::uint32_t p, int level, std::int64_t c, int k) {
    RingElement r(p, level);
    if (k < level) {
        std::int64_t v = c % static_cast<std::int64_t>(p);
        if (v < 0) v += p;
        r.c_[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(v);
    }
    return r;
}

RingElement RingElement::from_coeffs(std::uint32_t p, int level, std::span<const std::int64_t> coeffs) {
    RingElement r(p, level);
    for (std::size_t k = 0; k < coeffs.size() && k < static_cast<std::size_t>(level); ++k) {
        std::int64_t v = coeffs[k] % static_cast<std::int64_t>(p);
        if (v < 0) v += p;
        r.c_[k] = static_cast<std::uint32_t>(v);
    }
    return r;
}

void RingElement::check_compatible(const RingElement& o) const {
    if (p_ != o.p_ || level_ != o.level_)
        throw UsageError("ring mismatch: (p=" + std::to_string(p_) + ", level=" + std::to_string(level_) +
                         ") vs (p=" + std::to_string(o.p_) + ", level=" + std::to_string(o.level_) + ")");
}

bool RingElement::is_zero() const {
    for (int k = 0; k < level_; ++k)
        if (c_[static_cast<std::size_t>(k)]) return false;
    return true;
}

RingElement RingElement::operator+(const RingElement& o) const {
    check_compatible(o);
    RingElement r = *this;
    for (int k = 0; k < level_; ++k) {
        auto i = static_cast<std::size_t>(k);
        r.c_[i] = (c_[i] + o.c_[i]) % p_;
    }
    return r;
}

RingElement RingElement::operator-() const {
    RingElement r = *this;
    for (int k = 0; k < level_; ++k) {
        auto i = static_cast<std::size_t>(k);
        r.c_[i] = (p_ - c_[i]) % p_;
    }
    return r;
}

RingElement RingElement::operator-(const RingElement& o) const { return *this + (-o); }

RingElement RingElement::operator*(const RingElement& o) const {
    check_compatible(o);
    RingElement r = *this;
    for (int k = 0; k < level_; ++k) {
        std::uint64_t acc = 0;
        for (int j = 0; j <= k; ++j)
            acc += static_cast<std::uint64_t>(c_[static_cast<std::size_t>(j)]) * o.c_[static_cast<std::size_t>(k - j)];
        r.c_[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(acc % p_);
    }
    return r;
}

RingElement RingElement::inverse() const {
    if (!is_unit()) throw NotInvertible("element " + to_string() + " is not a unit");
    // power-series inversion: b_k = -c0^{-1} sum_{j=1..k} c_j b_{k-j}
    const std::uint64_t c0inv = inverse_mod(c_[0], p_);
    RingElement r(p_, level_);
    r.c_[0] = static_cast<std::uint32_t>(c0inv);
    for (int k = 1; k < level_; ++k) {
        std::uint64_t acc = 0;
        for (int j = 1; j <= k; ++j)
            acc += static_cast<std::uint64_t>(c_[static_cast<std::size_t>(j)]) * r.c_[static_cast<std::size_t>(k - j)] % p_;
        acc %= p_;
        r.c_[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>((p_ - acc) % p_ * c0inv % p_);
    }
    return r;
}

void RingElement::encode(std::string& out) const {
    for (int k = 0; k < level_; ++k) out.push_back(static_cast<char>(c_[static_cast<std::size_t>(k)]));
}

RingElement RingElement::decode(std::uint32_t p, int level, const std::uint8_t* bytes) {
    RingElement r(p, level);
    for (int k = 0; k < level; ++k) r.c_[static_cast<std::size_t>(k)] = bytes[k];
    return r;
}

std::string RingElement::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < level_; ++k) {
        auto v = c_[static_cast<std::size_t>(k)];
        if (!v) continue;
        if (!first) os << '+';
        first = false;
        if (k == 0 || v != 1) os << v;
        if (k >= 1) os << 't';
        if (k >= 2) os << '^' << k;
    }
    if (first) os << '0';
    return os.str();
}

}  // namespace gdist
