#include "gdist/rho.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gdist/errors.hpp"

namespace gdist {

struct RhoExpression::Node {
    enum class Kind { number, var, add, sub, mul, div, pow, log, sqrt, exp, min, max } kind;
    double value = 0;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = RhoExpression::Node;
using Kind = Node::Kind;
using Ptr = std::shared_ptr<const Node>;

struct Function {
    std::string_view name;
    Kind kind;
    int arity;
};

constexpr std::array<Function, 5> kFunctions{{
    {"log", Kind::log, 1}, {"sqrt", Kind::sqrt, 1}, {"exp", Kind::exp, 1}, {"min", Kind::min, 2}, {"max", Kind::max, 2}}};

Ptr make(Kind k, std::vector<Ptr> args = {}, double value = 0) {
    return std::make_shared<const Node>(Node{k, value, std::move(args)});
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Ptr parse() {
        Ptr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(what + " at offset " + std::to_string(pos_), pos_);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Ptr expr() {
        Ptr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Kind::add, {lhs, term()});
            else if (accept('-')) lhs = make(Kind::sub, {lhs, term()});
            else return lhs;
        }
    }

    Ptr term() {
        Ptr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = make(Kind::mul, {lhs, factor()});
            else if (accept('/')) lhs = make(Kind::div, {lhs, factor()});
            else return lhs;
        }
    }

    Ptr factor() {
        Ptr base = atom();
        if (accept('^')) return make(Kind::pow, {base, atom()});
        return base;
    }

    Ptr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (accept('(')) {
            Ptr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected '") + c + "'");
    }

    Ptr number() {
        double v = 0;
        const auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(end - s_.data());
        return make(Kind::number, {}, v);
    }

    Ptr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string_view name = s_.substr(start, pos_ - start);
        if (name == "t") return make(Kind::var);
        for (const auto& f : kFunctions) {
            if (f.name != name) continue;
            expect('(');
            std::vector<Ptr> args{expr()};
            if (accept(',')) args.push_back(expr());
            if (static_cast<int>(args.size()) != f.arity) {
                pos_ = start;
                fail(std::string(name) + " takes " + std::to_string(f.arity) + " argument(s)");
            }
            expect(')');
            return make(f.kind, std::move(args));
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }
};

double eval(const Node& n, double t) {
    auto arg = [&](std::size_t i) { return eval(*n.args[i], t); };
    switch (n.kind) {
        case Kind::number: return n.value;
        case Kind::var: return t;
        case Kind::add: return arg(0) + arg(1);
        case Kind::sub: return arg(0) - arg(1);
        case Kind::mul: return arg(0) * arg(1);
        case Kind::div: {
            const double d = arg(1);
            if (d == 0) throw DomainError("division by zero");
            return arg(0) / d;
        }
        case Kind::pow: return std::pow(arg(0), arg(1));
        case Kind::log: {
            const double x = arg(0);
            if (x <= 0) throw DomainError("log of a non-positive value");
            return std::log(x);
        }
        case Kind::sqrt: {
            const double x = arg(0);
            if (x < 0) throw DomainError("sqrt of a negative value");
            return std::sqrt(x);
        }
        case Kind::exp: return std::exp(arg(0));
        case Kind::min: return std::min(arg(0), arg(1));
        case Kind::max: return std::max(arg(0), arg(1));
    }
    return 0;
}

void print(const Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print(*n.args[0], out);
        out += op;
        print(*n.args[1], out);
        out += ')';
    };
    switch (n.kind) {
        case Kind::number: {
            std::array<char, 32> buf{};
            const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
            (void)ec;
            out.append(buf.data(), end);
            return;
        }
        case Kind::var: out += 't'; return;
        case Kind::add: binary(" + "); return;
        case Kind::sub: binary(" - "); return;
        case Kind::mul: binary(" * "); return;
        case Kind::div: binary(" / "); return;
        case Kind::pow: binary("^"); return;
        default: break;
    }
    for (const auto& f : kFunctions)
        if (f.kind == n.kind) out += f.name;
    out += '(';
    for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
    }
    out += ')';
}

}  // namespace

double RhoExpression::operator()(double t) const {
    const double v = eval(*root_, t);
    if (!std::isfinite(v)) throw DomainError("non-finite value at t = " + std::to_string(t));
    return v;
}

std::string RhoExpression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

RhoExpression parse_rho(std::string_view source) {
    RhoExpression e;
    e.root_ = Parser(source).parse();
    e.source_ = std::string(source);
    return e;
}

RhoValidation validate_rho(const RhoExpression& rho, double horizon, int samples) {
    if (!(horizon > 1) || samples < 2) throw UsageError("validation needs horizon > 1 and at least two samples");
    RhoValidation v{horizon, samples, true, true, {}};
    double prev = 0;
    for (int k = 0; k < samples; ++k) {
        const double t = 1 + (horizon - 1) * k / (samples - 1);
        const double y = rho(t);
        if (y < 0) throw DomainError("rho(" + std::to_string(t) + ") = " + std::to_string(y) + " is negative");
        if (k && y < prev && v.monotone) {
            v.monotone = false;
            std::ostringstream w;
            w << "rho decreases near t = " << t;
            v.warnings.push_back(w.str());
        }
        prev = y;
    }
    if (!(rho(horizon) > rho(1))) {
        v.grows = false;
        v.warnings.push_back("rho does not grow on [1, horizon]; unboundedness is doubtful");
    }
    return v;
}

}  // namespace gdist
