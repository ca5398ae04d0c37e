#pragma once

#include <stdexcept>
#include <string>

namespace supercoh {

// Malformed algebra spec strings, ranges, monomials.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A cell's cochain basis exceeded the configured cap.
class ResourceCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal cross-check failed (rank formulas disagree, d^2 != 0, ...).
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A caller-side contract was violated (non-cocycle where a cocycle is
// required, inhomogeneous input, wrong family, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DeserializationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SpecMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A bracket produced a monomial outside the algebra (or outside the
// materialized weight window).
class NotInBasisError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

} // namespace supercoh
