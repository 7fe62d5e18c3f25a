#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdist {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (mismatched moduli, bad indices, ...).
struct UsageError : Error {
    using Error::Error;
};

struct NotInvertible : Error {
    using Error::Error;
};

/// A value that claims to be a group element is not one (e.g. det != 1).
struct InvalidElement : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

/// BFS closure stopped at the element budget; `prefix` holds the canonical
/// encodings enumerated so far, in enumeration order.
struct PartialClosure : BudgetExceeded {
    PartialClosure(const std::string& what, std::vector<std::string> enumerated)
        : BudgetExceeded(what), prefix(std::move(enumerated)) {}
    std::vector<std::string> prefix;
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double best, double residual)
        : Error(what), best_estimate(best), best_residual(residual) {}
    double best_estimate;
    double best_residual;
};

/// Neither equality oracle could decide within its budget.
struct Undecided : Error {
    using Error::Error;
};

struct SearchFailure : Error {
    using Error::Error;
};

/// A proven inequality failed numerically; indicates a bug upstream.
struct GuaranteeViolation : Error {
    using Error::Error;
};

struct SyntaxError : Error {
    SyntaxError(const std::string& what, std::size_t at) : Error(what), offset(at) {}
    std::size_t offset;
};

}  // namespace gdist
