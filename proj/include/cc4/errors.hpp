#pragma once

#include <stdexcept>
#include <string>

namespace cc4 {

// Every failure raised by the library derives from Error so callers can map
// it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Closed-form masses divide by p2; raised on the p2 = 0 curve.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class InfeasibleMass : public Error {
 public:
  using Error::Error;
};

class InfeasibleShape : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class CollisionDetected : public Error {
 public:
  using Error::Error;
};

class RootNotBracketed : public Error {
 public:
  using Error::Error;
};

class LabelAbsent : public Error {
 public:
  using Error::Error;
};

}  // namespace cc4
