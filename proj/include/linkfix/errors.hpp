#ifndef LINKFIX_ERRORS_HPP
#define LINKFIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace linkfix {

/// Base class for all linkfix errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input: bad JSON, unknown map family, inconsistent spec.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A precondition on a library call was violated (zero vector, point on
/// chain, mismatched arc endpoints, invalid orbit, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A computation could not maintain the clearance it needs: a query point
/// sits too close to a chain, a displacement field vanishes on a contour,
/// or an arc cannot be kept away from the fixed point.
class ClearanceError : public Error {
public:
    explicit ClearanceError(const std::string& msg) : Error(msg) {}
};

/// A candidate ray hit a vertex or ran nearly parallel to a crossed
/// segment. Retried internally; escapes only when retries are exhausted.
class NonGenericRayError : public Error {
public:
    explicit NonGenericRayError(const std::string& msg) : Error(msg) {}
};

/// Geometrically degenerate input: overlapping orbit segments, zero
/// bounded faces, sliver faces thinner than any usable clearance.
class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& msg) : Error(msg) {}
};

/// The map's Lipschitz certificate does not meet the bound an operation
/// requires (displacement Lipschitz constant must not exceed 1).
class CertificateError : public Error {
public:
    explicit CertificateError(const std::string& msg) : Error(msg) {}
};

/// A conclusion that is guaranteed for certified maps failed to hold.
/// Reaching this indicates a bug in the library or a broken certificate,
/// never expected behaviour.
class FalsificationError : public Error {
public:
    explicit FalsificationError(const std::string& msg) : Error(msg) {}
};

/// Two independent computations of the same quantity disagreed, or a
/// structural invariant of an internal data structure broke.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

} // namespace linkfix

#endif
