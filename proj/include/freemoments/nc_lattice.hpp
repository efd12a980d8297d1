#pragma once

// Non-crossing partitions of {1..n}: enumeration, the crossing predicate,
// Kreweras complements and the Moebius function of the NC(n) lattice.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "freemoments/rational.hpp"

namespace freemoments {

using Blocks = std::vector<std::vector<int>>;

/// Default ceiling on n for enumeration (Catalan(14) ~ 2.7M partitions).
inline constexpr int kDefaultMaxN = 14;

/// Effective ceiling: kDefaultMaxN, raised by FREEMOMENTS_MAX_N when set.
int enumeration_ceiling();

/// A set partition of {1..n} in canonical form (sorted blocks ordered by
/// least element). Stored as a restricted growth string: label(i) is the
/// index of the block containing i.
class SetPartition {
 public:
  /// Validates and canonicalizes; throws Error(validation) on malformed input.
  static SetPartition from_blocks(int n, const Blocks& blocks);
  static SetPartition from_labels(std::vector<std::uint8_t> labels);
  static SetPartition discrete(int n);
  static SetPartition full(int n);

  int n() const noexcept { return static_cast<int>(labels_.size()); }
  int block_count() const noexcept { return blocks_; }
  int label(int element) const { return labels_.at(element - 1); }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  Blocks blocks() const;
  std::vector<int> block_sizes() const;

  bool refines(const SetPartition& coarser) const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  SetPartition(std::vector<std::uint8_t> labels, int blocks)
      : labels_(std::move(labels)), blocks_(blocks) {}

  std::vector<std::uint8_t> labels_;
  int blocks_ = 0;
};

/// True iff no j1 < j2 < j3 < j4 puts j1, j3 in one block and j2, j4 in another.
bool is_noncrossing(const SetPartition& p);
/// Validates `blocks` as a set partition of {1..n} first.
bool is_noncrossing(int n, const Blocks& blocks);

class NCPartition {
 public:
  /// Throws Error(validation) when the blocks do not form a non-crossing
  /// partition of {1..n}.
  static NCPartition from_blocks(int n, const Blocks& blocks);
  static NCPartition from_set_partition(const SetPartition& p);
  static NCPartition discrete(int n) { return NCPartition(SetPartition::discrete(n)); }
  static NCPartition full(int n) { return NCPartition(SetPartition::full(n)); }

  int n() const noexcept { return partition_.n(); }
  int block_count() const noexcept { return partition_.block_count(); }
  Blocks blocks() const { return partition_.blocks(); }
  std::vector<int> block_sizes() const { return partition_.block_sizes(); }
  const SetPartition& as_set_partition() const noexcept { return partition_; }
  bool refines(const NCPartition& coarser) const { return partition_.refines(coarser.partition_); }

  friend bool operator==(const NCPartition&, const NCPartition&) = default;

 private:
  explicit NCPartition(SetPartition p) : partition_(std::move(p)) {}
  friend std::vector<NCPartition> enumerate_nc(int, std::optional<int>);

  SetPartition partition_;
};

/// Lexicographic comparison of canonical block lists (a block that is a
/// prefix of another sorts first).
bool canonical_less(const NCPartition& a, const NCPartition& b);

/// All of NC(n) in lexicographic canonical order. Throws Error(size_limit)
/// unless 1 <= n <= ceiling (default: enumeration_ceiling()).
std::vector<NCPartition> enumerate_nc(int n, std::optional<int> ceiling = std::nullopt);

/// All set partitions of {1..n} in restricted-growth-string order.
std::vector<SetPartition> enumerate_set_partitions(int n);

/// Kreweras complement, realized as the permutation pi^{-1} gamma with gamma
/// the cycle (1 2 ... n) and each block read as an increasing cycle. Blocks
/// of K(p) interleave with p on 1 1' 2 2' ... n n' without crossing.
NCPartition kreweras_complement(const NCPartition& p);

struct NCInterval {
  NCPartition lower;
  NCPartition upper;

  /// Throws Error(invalid_interval) when lower does not refine upper.
  NCInterval(NCPartition lower_, NCPartition upper_);
};

/// Moebius value of [0, 1] in NC(k): (-1)^(k-1) Catalan(k-1).
Integer mobius_full_nc(int k);

/// Closed form: [lower, upper] factors over blocks V of upper into
/// [lower|V, 1_V], and each of those is isomorphic to [0, K(lower|V)], a
/// product of full lattices NC(|W|) over blocks W of the Kreweras complement.
Integer mobius_nc(const NCInterval& interval);

/// Brute-force poset recursion mu(x, y) = -sum_{x <= z < y} mu(x, z) over the
/// elements of NC(n). Exponential; kept as an oracle.
Integer mobius_nc_poset(const NCInterval& interval);

/// Every Moebius value of NC(n) by poset recursion, indexed by positions in
/// enumerate_nc(n); entries for non-comparable pairs are empty.
struct MobiusTable {
  std::vector<NCPartition> elements;
  std::vector<std::vector<std::optional<Integer>>> values;  // values[x][y]
};
MobiusTable mobius_table_poset(int n);

}  // namespace freemoments
