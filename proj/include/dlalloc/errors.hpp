#ifndef DLALLOC_ERRORS_HPP_
#define DLALLOC_ERRORS_HPP_

#include <stdexcept>

namespace dlalloc {

// A numeric or structural argument outside its documented domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An allocation vector or action index that does not decode for the scenario.
class InvalidAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation called on an object in the wrong lifecycle state
// (stepping a finished episode, back-propagating through a stale cache).
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite values reached the optimizer.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive enumeration would exceed its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dlalloc

#endif  // DLALLOC_ERRORS_HPP_
