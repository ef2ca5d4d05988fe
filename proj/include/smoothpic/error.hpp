#pragma once

#include <stdexcept>
#include <string>

namespace smoothpic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid arguments or violated preconditions.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// Emits a warning line on stderr ("smoothpic: warning: ...").
void warn(const std::string& message);

}  // namespace smoothpic
