#pragma once

#include <stdexcept>
#include <string>

namespace subhyp {

/// Malformed input: bad domain file, invalid parameters, point outside the domain.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The decomposition is too coarse for the request.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A boundary element is not covered by any rule of a BoundaryFunction.
struct DataRuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A subhyperbolic length or trace ladder failed to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace subhyp
