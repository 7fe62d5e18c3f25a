#include "gdist/permutation.hpp"

#include <numeric>
#include <sstream>

#include "gdist/errors.hpp"

namespace gdist {

Permutation::Permutation(std::size_t degree) : img_(degree) {
    if (degree > 65535) throw UsageError("permutation degree too large");
    std::iota(img_.begin(), img_.end(), std::uint16_t{0});
}

Permutation::Permutation(std::vector<std::uint16_t> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size(), false);
    for (auto v : img_) {
        if (v >= img_.size() || seen[v]) throw UsageError("image table is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::from_cycles(std::size_t degree, std::initializer_list<std::initializer_list<int>> cycles) {
    std::vector<std::uint16_t> img(degree);
    std::iota(img.begin(), img.end(), std::uint16_t{0});
    for (const auto& cyc : cycles) {
        std::vector<int> pts(cyc);
        for (std::size_t i = 0; i < pts.size(); ++i)
            img.at(static_cast<std::size_t>(pts[i])) = static_cast<std::uint16_t>(pts[(i + 1) % pts.size()]);
    }
    return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
        if (img_[i] != i) return false;
    return true;
}

Permutation Permutation::operator*(const Permutation& o) const {
    if (degree() != o.degree()) throw UsageError("permutation degree mismatch");
    Permutation r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[i] = o.img_[img_[i]];
    return r;
}

Permutation Permutation::inverse() const {
    Permutation r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<std::uint16_t>(i);
    return r;
}

Permutation Permutation::pow(long long e) const {
    Permutation base = e < 0 ? inverse() : *this;
    unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Permutation result(degree());
    while (n) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

std::uint64_t Permutation::order() const {
    std::vector<bool> seen(img_.size(), false);
    std::uint64_t ord = 1;
    for (std::size_t i = 0; i < img_.size(); ++i) {
        if (seen[i]) continue;
        std::uint64_t len = 0;
        for (std::size_t j = i; !seen[j]; j = img_[j]) {
            seen[j] = true;
            ++len;
        }
        ord = std::lcm(ord, len);
    }
    return ord;
}

void Permutation::encode_into(std::string& out) const {
    for (auto v : img_) {
        out.push_back(static_cast<char>(v & 0xff));
        out.push_back(static_cast<char>(v >> 8));
    }
}

std::string Permutation::encode() const {
    std::string out;
    out.reserve(2 * img_.size());
    encode_into(out);
    return out;
}

Permutation Permutation::decode(const char* bytes, std::size_t degree) {
    Permutation r;
    r.img_.resize(degree);
    const auto* b = reinterpret_cast<const std::uint8_t*>(bytes);
    for (std::size_t i = 0; i < degree; ++i)
        r.img_[i] = static_cast<std::uint16_t>(b[2 * i] | (b[2 * i + 1] << 8));
    return r;
}

Permutation Permutation::decode(const std::string& code) {
    if (code.size() % 2) throw UsageError("permutation code has odd length");
    return decode(code.data(), code.size() / 2);
}

std::string Permutation::to_string() const {
    std::ostringstream os;
    std::vector<bool> seen(img_.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < img_.size(); ++i) {
        if (seen[i] || img_[i] == i) continue;
        any = true;
        os << '(';
        for (std::size_t j = i; !seen[j]; j = img_[j]) {
            seen[j] = true;
            os << (j == i ? "" : " ") << j;
        }
        os << ')';
    }
    if (!any) os << "()";
    return os.str();
}

}  // namespace gdist
