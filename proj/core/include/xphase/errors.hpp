#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xphase {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two values built over different symplectic contexts were combined.
class ContextMismatchError : public Error {
public:
    ContextMismatchError() : Error("operands belong to different symplectic contexts") {}
};

/// Expression text could not be parsed; `offset` is the byte position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// An operand violates a precondition (wrong variable sector, bad exponent, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// The constraint matrix is singular: first-class constraints present.
class FirstClassError : public Error {
public:
    FirstClassError()
        : Error("constraint matrix is singular: first-class constraints present "
                "(gauge fixing is out of scope)") {}
};

}  // namespace xphase
