#pragma once

/**
 * Expressions in one variable t for target profiles ρ.
 *
 *   expr   := term (('+' | '-') term)*
 *   term   := factor (('*' | '/') factor)*
 *   factor := atom ('^' atom)?
 *   atom   := number | 't' | func '(' expr (',' expr)? ')' | '(' expr ')'
 *   func   := log | sqrt | exp | min | max
 */

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gdist {

class RhoExpression {
public:
    struct Node;

    /// Throws DomainError on log or sqrt of a negative, division by zero, or a non-finite result.
    double operator()(double t) const;
    /// Canonical text; parsing it back gives an expression with identical values.
    std::string to_string() const;
    const std::string& source() const { return source_; }

private:
    friend RhoExpression parse_rho(std::string_view);
    std::shared_ptr<const Node> root_;
    std::string source_;
};

/// Throws SyntaxError carrying the byte offset of the offending token.
RhoExpression parse_rho(std::string_view source);

struct RhoValidation {
    double horizon = 0;
    int samples = 0;
    bool monotone = true;
    bool grows = true;  // ρ(horizon) > ρ(1), the sampled stand-in for unboundedness
    std::vector<std::string> warnings;
};

/// Samples [1, horizon]. Negative or undefined values are fatal (DomainError);
/// monotonicity and growth are advisory and only produce warnings.
RhoValidation validate_rho(const RhoExpression& rho, double horizon, int samples = 1000);

}  // namespace gdist
