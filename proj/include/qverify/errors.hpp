#pragma once

#include <stdexcept>
#include <string>

namespace qv {

/// Base class for every failure raised by the verification engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class OrderMismatch : public Error {
 public:
  OrderMismatch(int lhs, int rhs)
      : Error("series order mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

class NonInvertible : public Error {
 public:
  NonInvertible() : Error("series has zero constant term") {}
};

class NegativeExponent : public Error {
 public:
  using Error::Error;
};

class NotAPerfectRoot : public Error {
 public:
  using Error::Error;
};

class NonTruncating : public Error {
 public:
  using Error::Error;
};

class PoleInDenominator : public Error {
 public:
  using Error::Error;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class SamplerExhausted : public Error {
 public:
  using Error::Error;
};

class UnknownIdentity : public Error {
 public:
  explicit UnknownIdentity(const std::string& name) : Error("unknown identity or pair: " + name) {}
};

}  // namespace qv
