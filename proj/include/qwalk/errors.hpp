#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

/// Rejected argument or violated precondition. Maps to CLI exit code 2.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Computation could not be certified or did not converge. Maps to CLI exit code 1.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qwalk
