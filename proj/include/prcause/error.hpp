#pragma once

#include <stdexcept>
#include <string>

namespace prcause {

// Malformed model, automaton or scheduler input.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& message, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                      : message),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// An enumeration exceeded its configured budget; no verdict is given.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace prcause
