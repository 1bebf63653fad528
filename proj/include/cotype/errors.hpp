#pragma once

#include <stdexcept>
#include <string>

namespace cotype {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured size cap (factorial enumeration, local factor size) was exceeded.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration or sampling would exceed the configured matrix budget.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact computation produced something impossible (e.g. a nonzero
// remainder in a division that must be exact).
class ArithmeticBug : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class RankExceedsDimension : public DomainError {
public:
    using DomainError::DomainError;
};

class PrimeMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

class NotWeaklyDecreasing : public DomainError {
public:
    using DomainError::DomainError;
};

class LabelMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace cotype
