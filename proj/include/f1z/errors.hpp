#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace f1z {

// Malformed .lg input. `line` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                      : std::move(msg)),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_ = 0;
};

// An enumeration or search was refused because it would exceed the
// configured budget. `required` is the budget that would have sufficed.
class BudgetError : public std::runtime_error {
public:
    BudgetError(std::string msg, std::uint64_t required)
        : std::runtime_error(msg + " (required budget: " + std::to_string(required) + ")"),
          required_(required) {}

    std::uint64_t required() const { return required_; }

private:
    std::uint64_t required_ = 0;
};

// Two routes that must agree exactly did not (interpolation mismatch,
// non-integral coefficient, telescoping failure).  Always a hard error.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace f1z
