#pragma once

#include <stdexcept>
#include <string>

namespace entropia {

enum class ErrorKind {
  numeric_escape,
  no_jet,
  no_complex_extension,
  parameter_out_of_range,
  resolution_insufficient,
  budget_exceeded,
  scale_too_small,
  below_threshold,
  precondition,
  config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace entropia
