#pragma once

#include <stdexcept>
#include <string>

namespace wvgg {

// Caller supplied an argument outside the operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not reach its accuracy target.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The quantity requested is not defined for the given parameters.
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An operation needs every interior component to be an atom or a ray.
class NotRaySupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wvgg
