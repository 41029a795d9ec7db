#pragma once

#include <stdexcept>

namespace oqrw {

/// Invalid or inconsistent experiment configuration (CLI exit code 1).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical contract violation: CFL breach, state blow-up, degenerate
/// branch, mass leak, missing barrier (CLI exit code 2).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing run outputs (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace oqrw
