#pragma once

// Free infinitely divisible laws nu(gamma, sigma), given by
//   R(z) = gamma + int (z + t) / (1 - t z) dsigma(t).
// Their free cumulants are k_1 = gamma + m_1(sigma) and
// k_p = m_{p-2}(sigma) + m_p(sigma); the same numbers are the classical
// cumulants of the classical correspondent.

#include <cstddef>
#include <optional>

#include "freemoments/measures.hpp"
#include "freemoments/sequences.hpp"

namespace freemoments {

struct LevyPair {
  Rational gamma = 0;
  Measure sigma = Measure::zero();

  friend bool operator==(const LevyPair&, const LevyPair&) = default;
};

CumulantSequence free_cumulants_from_levy(const LevyPair& lp, std::size_t p);
MomentSequence moments_of_free_id(const LevyPair& lp, std::size_t p);

CumulantSequence classical_cumulants_from_levy(const LevyPair& lp, std::size_t p);
MomentSequence moments_of_classical_id(const LevyPair& lp, std::size_t p);

/// (gamma + gamma', sigma + sigma'); sigmas must be discrete.
LevyPair levy_semigroup_add(const LevyPair& a, const LevyPair& b);
/// (c gamma, c sigma): the pair whose R-transform is c R.
LevyPair levy_scale(const LevyPair& lp, const Rational& c);

/// The pair of the free Poisson law with the given rate: (rate/2, rate/2 delta_1).
LevyPair free_poisson_pair(const Rational& rate);

struct MomentTransferReport {
  std::size_t order = 0;
  /// sigma has a moment of order p, hence so does nu(gamma, sigma).
  bool sigma_has_moment = false;
  bool even_order = false;
  /// Support inside (0, inf) / (-inf, 0).
  bool support_positive = false;
  bool support_negative = false;
  /// Support bounded below / above (always both for compact support).
  bool support_minorized = false;
  bool support_majorized = false;
  /// Even order or one-signed support: the converse transfer applies.
  bool converse_applies = false;
  /// sum over NC(p) of prod_V (M_{|V|-2} + M_{|V|}), M_j = int |t|^j dsigma,
  /// M_{-1} = 0: bounds |m_p| of the gamma = 0 law and its truncations.
  std::optional<Rational> truncation_bound;
};

MomentTransferReport diagnose_moment_transfer(const LevyPair& lp, std::size_t p);

}  // namespace freemoments
