#pragma once

#include <stdexcept>

namespace mcf {

// Argument outside the mathematical domain of a function (e.g. zeta with a <= 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Adaptive routine exhausted its budget before meeting the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root search called with endpoints of equal sign.
class BracketError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested load is at or beyond the interference-limited spectral efficiency.
class LimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mcf
