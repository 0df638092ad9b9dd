#pragma once

#include <stdexcept>
#include <string>

namespace disruptix {

// Failure classes map to distinct CLI exit codes (io=2, schema=3, numeric=4).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace disruptix
