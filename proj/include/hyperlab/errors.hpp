#pragma once

#include <stdexcept>
#include <string>

namespace hyperlab {

/// Negative power requested of a weighted shift whose weights are not
/// bounded away from zero.
struct InvertibilityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Input that is admissible in type but carries no information (zero vector,
/// empty lattice with nothing to hit).
struct DegenerateInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A series whose terms fail to decrease over the tested horizon.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Polynomial approximation did not reach its tolerance within the degree cap.
struct ApproximationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Monte-Carlo box does not contain the set it is meant to cover.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hyperlab
