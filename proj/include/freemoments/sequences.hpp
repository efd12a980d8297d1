#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "freemoments/rational.hpp"

namespace freemoments {

/// Exact moments m_1..m_p of a measure (m_0 = 1 is implicit).
struct MomentSequence {
  std::vector<Rational> m;

  std::size_t order() const noexcept { return m.size(); }
  /// 1-based access, m(0) == 1.
  Rational operator()(std::size_t i) const { return i == 0 ? Rational(1) : m.at(i - 1); }

  friend bool operator==(const MomentSequence&, const MomentSequence&) = default;
};

enum class CumulantKind { free, classical };

std::string_view to_string(CumulantKind kind) noexcept;

struct CumulantSequence {
  std::vector<Rational> k;
  CumulantKind kind = CumulantKind::free;

  std::size_t order() const noexcept { return k.size(); }
  Rational operator()(std::size_t i) const { return k.at(i - 1); }

  friend bool operator==(const CumulantSequence&, const CumulantSequence&) = default;
};

}  // namespace freemoments
