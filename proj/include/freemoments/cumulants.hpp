#pragma once

// Exact moment <-> cumulant transforms. Free cumulants are sums over
// non-crossing partitions, classical cumulants over all set partitions:
//
//   m_i = sum_{pi in NC(i)}  prod_{V in pi} k_|V|
//   k_i = sum_{pi in NC(i)}  Mob(pi, 1_i) prod_{V in pi} m_|V|
//
// Mob(pi, 1_i) is the Moebius value of the interval [pi, 1_i] of the NC
// lattice; with that convention the two sums are inverse to each other.

#include <cstddef>
#include <vector>

#include "freemoments/sequences.hpp"

namespace freemoments {

/// Above this order classical transforms go through the exponential
/// generating function instead of enumerating set partitions.
inline constexpr std::size_t kSetPartitionMaxOrder = 12;

MomentSequence moments_from_free_cumulants(const CumulantSequence& k);
CumulantSequence free_cumulants_from_moments(const MomentSequence& m);

CumulantSequence classical_cumulants_from_moments(const MomentSequence& m);
MomentSequence moments_from_classical_cumulants(const CumulantSequence& c);

/// exp(sum c_i z^i / i!) = sum m_i z^i / i!, solved at series level.
CumulantSequence classical_cumulants_from_moments_egf(const MomentSequence& m);
MomentSequence moments_from_classical_cumulants_egf(const CumulantSequence& c);

/// Moments of the free convolution: cumulants add.
MomentSequence free_convolve(const MomentSequence& a, const MomentSequence& b);
/// Moments of the classical convolution.
MomentSequence classical_convolve(const MomentSequence& a, const MomentSequence& b);

/// Moments of the law translated by `shift` (binomial expansion).
MomentSequence shift_moments(const MomentSequence& m, const Rational& shift);

CumulantSequence add(const CumulantSequence& a, const CumulantSequence& b);
CumulantSequence scale(const CumulantSequence& a, const Rational& factor);

namespace detail {

/// Partitions of {1..n} grouped by block-size multiset.
struct PartitionClass {
  std::vector<int> sizes;  // non-increasing
  Integer count;           // number of partitions with these block sizes
  Integer mobius;          // sum of Mob(pi, 1_n) over those partitions
};

const std::vector<PartitionClass>& nc_classes(std::size_t n);
const std::vector<PartitionClass>& set_partition_classes(std::size_t n);

}  // namespace detail

}  // namespace freemoments
