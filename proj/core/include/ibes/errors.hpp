#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ibes {

// A configured size/cost cap would be exceeded. Deliberate refusal, never a
// silent truncation; callers surface the cap in reports.
struct CapError : std::runtime_error {
  std::uint64_t cap;
  CapError(const std::string& what, std::uint64_t cap_value)
      : std::runtime_error(what + " (cap " + std::to_string(cap_value) + ")"),
        cap(cap_value) {}
};

// Atoms outside the declared universe, or mismatched universes.
struct UniverseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration (bounds, engine/mode combinations, preconditions).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input file violates a schema; `pointer` is a JSON-pointer-style path.
struct SchemaError : std::runtime_error {
  std::string pointer;
  SchemaError(const std::string& what, std::string ptr)
      : std::runtime_error(what + " (at " + ptr + ")"), pointer(std::move(ptr)) {}
};

}  // namespace ibes
