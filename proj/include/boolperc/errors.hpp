#pragma once

#include <stdexcept>
#include <string>

namespace boolperc {

/// Invalid or non-finite input parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The sampling window is too small for the requested query: centers outside
/// it could change the answer.
class CensoringError : public std::runtime_error {
 public:
  CensoringError(double required_margin, double available_margin);

  double required_margin() const { return required_; }
  double available_margin() const { return available_; }

 private:
  double required_;
  double available_;
};

/// An estimator could not produce a value inside its search range.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derived quantity is undefined for the given input (e.g. division by a
/// zero estimate).
class UndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace boolperc
