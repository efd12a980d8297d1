#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace freemoments {

enum class ErrorCode {
  validation,
  size_limit,
  invalid_interval,
  kind_mismatch,
  order_mismatch,
  pole,
  composition_domain,
  non_invertible_series,
  moment_does_not_exist,
  domain,
  unsupported,
  insufficient_points,
  region_too_large,
  budget_exceeded,
};

/// Machine-readable identifier, e.g. "size_limit".
std::string_view to_string(ErrorCode code) noexcept;

/// True for codes that report a numeric failure rather than bad input.
bool is_numeric_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace freemoments
