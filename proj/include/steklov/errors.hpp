#pragma once

#include <stdexcept>
#include <string>

namespace steklov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the region where a quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The branches λ̃_k and μ̃_l never meet for the requested boundary ratio.
class NoCrossing : public DomainError {
 public:
  using DomainError::DomainError;
};

// A numerical procedure failed to deliver its contract (no bracket,
// no convergence, lost definiteness).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotSPD : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace steklov
