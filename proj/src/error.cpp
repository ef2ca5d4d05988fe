#include "smoothpic/error.hpp"

#include <iostream>

namespace smoothpic {

void warn(const std::string& message) { std::cerr << "smoothpic: warning: " << message << '\n'; }

}  // namespace smoothpic
