#pragma once

#include <stdexcept>
#include <string>

namespace clf {

/// Invalid caller input: malformed literals, out-of-range indices,
/// operands from different groups.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A configured cap was exceeded (BFS radius, node budget, visiting-path
/// support size). The message names the cap; silent truncation is never
/// an option.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace clf
