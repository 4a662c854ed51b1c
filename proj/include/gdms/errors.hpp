#pragma once

#include <stdexcept>
#include <string>

namespace gdms {

// Bad user input or violated precondition. CLI exit code 1.
struct invalid_input : std::runtime_error {
  explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured cap (cylinder count, enumeration depth, ...) was exceeded.
// CLI exit code 2.
struct resource_limit : std::runtime_error {
  explicit resource_limit(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation not available for this kind of system (e.g. spectral pressure
// on a non-affine system).
struct unsupported_method : invalid_input {
  explicit unsupported_method(const std::string& msg) : invalid_input(msg) {}
};

// System fails a structural requirement (e.g. P(0) <= 0 in the Bowen solver).
struct degenerate_system : invalid_input {
  explicit degenerate_system(const std::string& msg) : invalid_input(msg) {}
};

// Cover budget frontier lies above the deepest target word.
struct invalid_budget : invalid_input {
  explicit invalid_budget(const std::string& msg) : invalid_input(msg) {}
};

// Broken internal invariant. CLI exit code 3.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace gdms
