#pragma once

#include <stdexcept>
#include <string>

namespace hitlab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Contract violation on the caller's side: bad index, bad probability,
// mismatched sizes, malformed input file.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An operation that requires a connected graph received a disconnected one.
class Disconnected : public Error {
 public:
  using Error::Error;
};

// Linear system could not be solved to the advertised accuracy.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// Iterative procedure or simulation exceeded its hard cap.
class IterationLimit : public Error {
 public:
  using Error::Error;
};

// The inputs are valid but the math degenerates: an empty partition block,
// an infinite epsilon, no shared neighbours, no escape edges.
class Degenerate : public Error {
 public:
  using Error::Error;
};

}  // namespace hitlab
