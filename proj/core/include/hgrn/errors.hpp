#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hgrn {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A model parameter inequality (b > 0, d > 0, a/b < c/d, ...) is violated.
/// `what()` names the violated inequality.
class ParameterError : public Error
{
  public:
    using Error::Error;
};

/// A rate table is malformed or not strictly positive.
class RateError : public Error
{
  public:
    RateError(const std::string& msg, std::size_t index)
        : Error(msg + " (node " + std::to_string(index) + ")"), index_(index)
    {
    }
    std::size_t index() const noexcept { return index_; }

  private:
    std::size_t index_;
};

class DomainError : public Error
{
  public:
    using Error::Error;
};

class SizeMismatch : public Error
{
  public:
    SizeMismatch(std::size_t lhs, std::size_t rhs)
        : Error("size mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs))
    {
    }
};

class NegativeTime : public Error
{
  public:
    explicit NegativeTime(double t) : Error("negative time " + std::to_string(t)) {}
};

class NonpositiveLambda : public Error
{
  public:
    explicit NonpositiveLambda(double lambda)
        : Error("resolvent parameter must be positive, got " + std::to_string(lambda))
    {
    }
};

class NonMonotoneMap : public Error
{
  public:
    explicit NonMonotoneMap(std::size_t edge)
        : Error("mapped cell edges decrease at edge " + std::to_string(edge))
    {
    }
};

class QuadratureFailure : public Error
{
  public:
    using Error::Error;
};

class InversionFailure : public Error
{
  public:
    using Error::Error;
};

class BadMode : public Error
{
  public:
    explicit BadMode(int mode) : Error("mode must be 1 or 2, got " + std::to_string(mode)) {}
};

class EmptyEnsemble : public Error
{
  public:
    EmptyEnsemble() : Error("particle ensemble must contain at least one particle") {}
};

} // namespace hgrn
