#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

// Caller passed something that violates an operation's preconditions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A factorization or other numerical routine broke down.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dyad-model file; the message names the record and field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown environment/algorithm names and other bad experiment settings.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dyadic
