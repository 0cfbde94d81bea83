#pragma once

#include <stdexcept>
#include <string>

namespace chowla {

// All workbench failures are loud: no silent wrapping, truncation, or
// partial results.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Argument outside a table's or operation's supported range.
class RangeError : public Error {
  public:
    using Error::Error;
};

// A requested computation exceeds the configured memory/enumeration budget.
class CapacityError : public Error {
  public:
    using Error::Error;
};

// Checked wide-integer arithmetic overflowed.
class OverflowError : public Error {
  public:
    using Error::Error;
};

// Invalid mathematical input (bad discriminant, malformed polynomial, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

// A sieve problem violates one of the sieve axioms.
class AxiomError : public Error {
  public:
    using Error::Error;
};

// Degenerate sieve density: some prime removes every residue class.
class DegenerateSieveError : public AxiomError {
  public:
    using AxiomError::AxiomError;
};

} // namespace chowla
