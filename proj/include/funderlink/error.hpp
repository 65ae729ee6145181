#pragma once

#include <stdexcept>
#include <string>

namespace funderlink {

// Raised for malformed or missing user input. The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace funderlink
