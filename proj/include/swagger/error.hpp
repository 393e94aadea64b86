#pragma once

#include <stdexcept>
#include <string>

namespace swagger {

enum class Errc {
  invalid_dimension,
  invalid_band,
  invalid_weight,
  invalid_probability,
  invalid_structure,
  shape,
  kink,
  numeric,
  range,
  not_separable,
  degenerate,
  generation,
  undefined_metrics,
  io,
};

const char* to_string(Errc code) noexcept;

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace swagger
