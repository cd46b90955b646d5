#ifndef XNT_ERROR_HPP
#define XNT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xnt {

// Malformed arguments: non-prime moduli, bad orders, arity mismatches.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a well-formed operation (dlog of 0, scale by 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// A mathematical invariant the code asserts did not hold.
class AssertionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t offset, const std::string& what)
        : InputError("parse error at offset " + std::to_string(offset) + ": " + what),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace xnt

#endif
