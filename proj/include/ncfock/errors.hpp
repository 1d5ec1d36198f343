#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncfock {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when caller input violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvalidWord : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ShapeMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotContractive : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ImpureError : public PreconditionError {
 public:
  ImpureError(const std::string& what, double residual)
      : PreconditionError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NoFactorization : public PreconditionError {
 public:
  NoFactorization(const std::string& what, double residual)
      : PreconditionError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class WindowOverflow : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ParseError : public PreconditionError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : PreconditionError(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ncfock
