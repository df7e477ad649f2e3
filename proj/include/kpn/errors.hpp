#pragma once

#include <stdexcept>
#include <string>

namespace kpn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on a user-supplied argument was violated.
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error(what) {}
};

/// Interpolation was attempted through a degenerate point set
/// (duplicate abscissae).
class DegenerateInterpolation : public Error {
public:
    explicit DegenerateInterpolation(const std::string& what) : Error(what) {}
};

/// Reconstruction was requested for a subset that is not qualified.
class NotQualified : public Error {
public:
    explicit NotQualified(const std::string& what) : Error(what) {}
};

/// The joint outcome space exceeds the enumeration budget.
class EnumerationTooLarge : public Error {
public:
    EnumerationTooLarge(const std::string& what, std::string computed_size)
        : Error(what), computed_size(std::move(computed_size)) {}

    /// Decimal string of (#secrets) x (#transcripts) for the rejected request.
    std::string computed_size;
};

/// The linear program would exceed the subset-variable size cap.
class ProblemTooLarge : public Error {
public:
    explicit ProblemTooLarge(const std::string& what) : Error(what) {}
};

} // namespace kpn
