#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ccwlan {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A scenario or input document is malformed or violates a precondition.
class InvalidScenario : public Error {
public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured decision budget.
class CapExceeded : public Error {
public:
  CapExceeded(std::uint64_t estimate, std::uint64_t cap)
      : Error("decision count " + std::to_string(estimate) + " exceeds cap " + std::to_string(cap) +
              " (use the reduced or heuristic scheduler)"),
        estimate_{estimate},
        cap_{cap} {}

  std::uint64_t estimate() const { return estimate_; }
  std::uint64_t cap() const { return cap_; }

private:
  std::uint64_t estimate_;
  std::uint64_t cap_;
};

}  // namespace ccwlan
