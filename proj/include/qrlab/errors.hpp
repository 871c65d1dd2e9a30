#pragma once

#include <stdexcept>
#include <string>

namespace qrlab {

/// Thrown when an operation needs at least one branch with nonzero modulus
/// and every branch of the input carries zero probability mass.
struct AllZeroAmplitudes : std::runtime_error {
    explicit AllZeroAmplitudes(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a branch / entry / eigenstate index is outside the valid range.
struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

/// Thrown by the scoped bias rule when a group that must conserve its total
/// probability has no probability to conserve (all member moduli are zero).
struct EmptyGroup : std::runtime_error {
    explicit EmptyGroup(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a base probability of 0 or 1 would collapse the trinomial
/// null model (no up/down steps possible, zero variance).
struct DegenerateP0 : std::invalid_argument {
    explicit DegenerateP0(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an exact-distribution request exceeds the supported size.
struct EnumerationTooLarge : std::invalid_argument {
    explicit EnumerationTooLarge(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a z statistic is requested for a tally with zero spread.
struct ZeroSigma : std::runtime_error {
    explicit ZeroSigma(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by physical-quantity calculators on a mass, length, or rate that
/// must be strictly positive and is not.
struct NonPositiveInput : std::invalid_argument {
    explicit NonPositiveInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace qrlab
