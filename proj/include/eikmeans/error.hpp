#pragma once

#include <stdexcept>
#include <string>

namespace eikmeans {

/// Failure categories. The numeric values are mirrored by the C API status codes.
enum class Errc {
  invalid_argument = 1,
  dimension_mismatch = 2,
  degenerate_model = 3,
  parse_error = 4,
  io_error = 5,
  unsupported_version = 6,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace eikmeans
