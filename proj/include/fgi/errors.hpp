#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fgi {

/// Argument outside the mathematical domain of a function (poles, m outside (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation needs 0 < measure(E) < 1.
class DegenerateSetError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative method (root polish, quadrature refinement) failed to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Level-set extraction hit more sign changes than it is willing to resolve.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sparse factorization failed in the extension energy solver.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed set description. `offset` is the byte offset into the source text.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::invalid_argument(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace fgi
