#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace dforms {

// Invalid arguments, malformed input files, unusable configurations.
struct invalid_input : std::invalid_argument {
  explicit invalid_input(const std::string& msg) : std::invalid_argument(msg) {}
};

// A configured resource cap (group size, monomial count, ...) was hit.
// Always an explicit error, never a silent truncation.
struct cap_exceeded : std::runtime_error {
  explicit cap_exceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal cross-check failed; signals an arithmetic bug, reported
// distinctly from bad input.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

// Global resource limits.  Mutable configuration, read by long-running
// enumerations; the CLI overrides them from flags / DFORMS_CAPS.
struct Caps {
  std::size_t group = 10'000'000;      // max elements in a group closure
  std::size_t monomials = 2'000'000;   // max generator monomials per graded piece
  std::size_t terms = 8'000'000;       // max terms in one ring element
  std::size_t field_enum = 1u << 20;   // max field size for exhaustive scans
};

inline Caps& caps() {
  static Caps c;
  return c;
}

}  // namespace dforms
