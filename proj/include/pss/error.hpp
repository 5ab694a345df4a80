#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pss {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownSymbol : public Error {
public:
    explicit UnknownSymbol(const std::string& name) : Error("unknown symbol '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnboundSymbol : public Error {
public:
    explicit UnboundSymbol(const std::string& name) : Error("unbound symbol '" + name + "'") {}
};

// Time derivative of a parameter beyond the stored depth.
class DepthExceeded : public Error {
public:
    using Error::Error;
};

// Jet order would exceed the allowed maximum.
class OrderOverflow : public Error {
public:
    using Error::Error;
};

class NumericalDomain : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DivisionError : public Error {
public:
    using Error::Error;
};

class GenericityViolation : public Error {
public:
    using Error::Error;
};

class IrreducibilityViolation : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class EmptyMask : public Error {
public:
    using Error::Error;
};

class BlowUp : public Error {
public:
    BlowUp(const std::string& what, std::size_t last_valid) : Error(what), last_valid_(last_valid) {}
    /// Index (row-major over the grid) of the last point integrated without blow-up.
    std::size_t last_valid() const noexcept { return last_valid_; }

private:
    std::size_t last_valid_;
};

class MaskCollision : public Error {
public:
    using Error::Error;
};

class BranchViolation : public Error {
public:
    using Error::Error;
};

}  // namespace pss
