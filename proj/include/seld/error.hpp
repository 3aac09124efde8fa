#pragma once

#include <stdexcept>
#include <string>

namespace seld {

// Every module reports contract violations and IO failures with this type.
// Messages carry the file/frame/class context needed to locate the problem.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seld
