#pragma once

#include <stdexcept>
#include <string>

namespace glv {

// Input outside the documented domain of an operation (e.g. a value >= 2*P
// passed to to_canonical, or an unsupported register width).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Two batches of different lane widths were combined.
class WidthMismatchError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A constants or input file failed to parse or had wrong dimensions.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace glv
