#pragma once

#include <stdexcept>
#include <string>

namespace gcf {

// Invalid user-supplied parameter (bad decimation factor, overlapping bands, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A condition the mathematics rules out was observed anyway.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A fixed-point register exceeded its allotted width.
class OverflowError : public std::runtime_error {
 public:
  OverflowError(int stage, const std::string& what)
      : std::runtime_error(what), stage_(stage) {}

  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

}  // namespace gcf
