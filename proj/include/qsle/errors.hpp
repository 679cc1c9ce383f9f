#pragma once

#include <stdexcept>

namespace qsle {

// Dimension or layout mismatch between states, partitions, or factors.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematically valid range (bad m, non-positive omega, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input failed a structural check: file contents, non-Hermitian matrix, bad norm.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// |<psi|phi>| = 1 up to tolerance: the two states span no rotation plane and
// the transit time is zero. Callers treat this as tau = 0.
class DegeneratePairError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A floating-point guard tripped beyond its tolerance; indicates a bug upstream.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Problem too large for the brute-force oracle.
class OracleScaleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace qsle
