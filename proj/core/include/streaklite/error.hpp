#pragma once

#include <stdexcept>
#include <string>

namespace streaklite {

/// File-system or file-format failure. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A postcondition or internal invariant did not hold. Maps to CLI exit code 4.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace streaklite
