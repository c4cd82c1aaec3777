#pragma once

#include <stdexcept>
#include <string>

namespace gpot {

/// Malformed input: unparsable files, unknown vertices, bad parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The input is well-formed but the requested computation cannot be carried
/// out (singular system, unstable ends, no convergence, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gpot
