#pragma once

#include <stdexcept>
#include <string>

namespace itpn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Vehicles closer than the co-location threshold; the engagement is over.
class CoLocatedError : public Error {
public:
    using Error::Error;
};

/// Interceptor speed fell below the configured floor (gamma-rate singularity).
class SpeedFloorError : public Error {
public:
    using Error::Error;
};

/// Achieved acceleration left [a_min, a_max]; indicates integrator overshoot.
class OutOfEnvelopeError : public Error {
public:
    using Error::Error;
};

/// The time-to-go denominator is too close to zero for the geometry at hand.
class DegenerateDenominatorError : public Error {
public:
    using Error::Error;
};

/// chi too small relative to |a_min|; the reachable envelope is undefined.
class DegenerateEnvelopeError : public Error {
public:
    using Error::Error;
};

/// A state component became NaN/inf during integration.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario document (syntax); carries the offending line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("parse error at line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Well-formed document whose values violate a parameter invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace itpn
