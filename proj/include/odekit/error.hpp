#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odekit {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text; `position` is the byte offset of the offending token.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& detail, std::size_t position)
        : Error("syntax error at offset " + std::to_string(position) + ": " + detail),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Exponent that is not a nonnegative integer literal (or is absurdly large).
class UnsupportedExponentError : public Error {
public:
    UnsupportedExponentError(const std::string& detail, std::size_t position)
        : Error("unsupported exponent at offset " + std::to_string(position) + ": " + detail),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Exact division by an expression that is identically zero.
class DivisionByZeroError : public Error {
public:
    explicit DivisionByZeroError(const std::string& context)
        : Error("division by zero: " + context) {}
};

// Evaluation requested a variable that has no value bound.
class MissingBindingError : public Error {
public:
    explicit MissingBindingError(const std::string& variable)
        : Error("no value bound for variable " + variable), variable_(variable) {}

    const std::string& variable() const noexcept { return variable_; }

private:
    std::string variable_;
};

// Evaluation point lies on the zero locus of a denominator.
class PoleError : public Error {
public:
    explicit PoleError(const std::string& context) : Error("pole: " + context) {}
};

// A computation was invoked outside the hypotheses it needs (e.g. a branch
// formula on an equation where the branch quantity vanishes identically).
class CaseViolationError : public Error {
public:
    explicit CaseViolationError(const std::string& context)
        : Error("case violation: " + context) {}
};

// Both components of the fundamental covector vanish identically, so no
// branch formula applies anywhere.
class MaximalDegenerationError : public CaseViolationError {
public:
    explicit MaximalDegenerationError(const std::string& context)
        : CaseViolationError("maximal degeneration: " + context) {}
};

// The frame determinant vanishes identically, so the moving frame cannot be
// solved for.
class SingularFrameError : public CaseViolationError {
public:
    explicit SingularFrameError(const std::string& context)
        : CaseViolationError("singular frame: " + context) {}
};

// A coordinate change whose Jacobian determinant vanishes identically.
class InvalidTransformationError : public Error {
public:
    explicit InvalidTransformationError(const std::string& context)
        : Error("invalid transformation: " + context) {}
};

// A symbolic computation exceeded the configured term budget.
class BudgetExceededError : public Error {
public:
    explicit BudgetExceededError(const std::string& context)
        : Error("term budget exceeded: " + context) {}
};

}  // namespace odekit
