#include "freemoments/error.hpp"

namespace freemoments {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::validation: return "validation";
    case ErrorCode::size_limit: return "size_limit";
    case ErrorCode::invalid_interval: return "invalid_interval";
    case ErrorCode::kind_mismatch: return "kind_mismatch";
    case ErrorCode::order_mismatch: return "order_mismatch";
    case ErrorCode::pole: return "pole";
    case ErrorCode::composition_domain: return "composition_domain";
    case ErrorCode::non_invertible_series: return "non_invertible_series";
    case ErrorCode::moment_does_not_exist: return "moment_does_not_exist";
    case ErrorCode::domain: return "domain";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::insufficient_points: return "insufficient_points";
    case ErrorCode::region_too_large: return "region_too_large";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
  }
  return "unknown";
}

bool is_numeric_failure(ErrorCode code) noexcept {
  return code == ErrorCode::region_too_large ||
         code == ErrorCode::insufficient_points;
}

}  // namespace freemoments
