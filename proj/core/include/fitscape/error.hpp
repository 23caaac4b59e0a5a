#pragma once

#include <stdexcept>
#include <string>

namespace fitscape {

// A fitness walk that is empty, too short, or holds values outside [0, 1].
class InvalidWalk : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric parameter outside its declared domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operands that do not match the predicate kind they are evaluated under.
class InvalidOperand : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A test case that does not conform to the program's action schemas.
class InvalidTest : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A malformed program definition.
class ProgramFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing experiment artifacts failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed numeric input; the message names the offending line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fitscape
