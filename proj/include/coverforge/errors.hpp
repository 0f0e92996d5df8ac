#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace coverforge {

// Bad user input: malformed files, schema violations, contract misuse.
class input_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration would exceed the configured capacity bound.
class capacity_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested cover does not exist; carries the offending divisor indices.
// This is a mathematical answer, not an operational failure.
class nonexistence_error : public std::runtime_error {
  public:
    nonexistence_error(std::string msg, std::vector<std::size_t> divisors)
        : std::runtime_error(std::move(msg)), divisors_(std::move(divisors)) {}

    const std::vector<std::size_t>& divisors() const { return divisors_; }

  private:
    std::vector<std::size_t> divisors_;
};

// Two computation routes that must agree did not.
class internal_error : public std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace coverforge
