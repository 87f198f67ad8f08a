#pragma once

#include <stdexcept>
#include <string>

namespace secint {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Operands built over different group presentations.
class SpecMismatch : public Error {
public:
    using Error::Error;
};

/// Ring elements whose basis kinds (single/pair/triple/component) disagree.
class VariantMismatch : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// A diagram rewrite whose precondition does not hold.
class MoveError : public Error {
public:
    using Error::Error;
};

} // namespace secint
