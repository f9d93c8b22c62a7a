#pragma once

#include <stdexcept>
#include <string>

namespace fockzero {

/// Failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
    usage,       // malformed request
    domain,      // parameter outside its mathematical domain
    validation,  // malformed data (non-monotone list, bad JSON, ...)
    hypothesis,  // an analytic precondition (e.g. a divergence condition) is not met
    fit,         // a least-squares fit has no usable data
    truncation,  // a truncation policy cannot be met within max_terms
    numerical,   // anything else that went wrong while computing
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown when a truncation policy cannot reach its target; carries the bound that was achieved.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double achieved_bound, std::size_t terms)
        : Error(ErrorKind::truncation, what), achieved_bound_(achieved_bound), terms_(terms) {}

    [[nodiscard]] double achieved_bound() const noexcept { return achieved_bound_; }
    [[nodiscard]] std::size_t terms() const noexcept { return terms_; }

private:
    double achieved_bound_;
    std::size_t terms_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) fail(kind, what);
}

}  // namespace fockzero
