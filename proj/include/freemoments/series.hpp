#pragma once

// Truncated formal power series over exact rationals and the formal
// R-transform chain
//
//   moments -> G(1/z) = z + m_1 z^2 + ... -> L = G(1/z)^{<-1>}
//           -> zK(z) = z / L(z) -> R(z) = (zK(z) - 1) / z.
//
// K = 1/L has a simple pole at 0; only the normalized zK is ever formed.

#include <cstddef>
#include <span>
#include <vector>

#include "freemoments/sequences.hpp"

namespace freemoments {

class TruncatedSeries {
 public:
  /// Coefficients a_0..a_N; the order is N = coeffs.size() - 1.
  explicit TruncatedSeries(std::vector<Rational> coeffs);

  static TruncatedSeries zero(std::size_t order);
  static TruncatedSeries constant(const Rational& c, std::size_t order);
  /// The series z.
  static TruncatedSeries identity(std::size_t order);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  const Rational& operator[](std::size_t i) const { return coeffs_.at(i); }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  TruncatedSeries truncated(std::size_t order) const;
  /// Multiplication by z: the order grows by one.
  TruncatedSeries times_z() const;
  /// Division by z; requires a zero constant term, the order drops by one.
  TruncatedSeries divided_by_z() const;

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  std::vector<Rational> coeffs_;
};

// Binary operations truncate to the smaller of the two orders.
TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const Rational& c, const TruncatedSeries& a);

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_scale(const TruncatedSeries& a, const Rational& c);

/// 1/s; throws Error(pole) when the constant term vanishes.
TruncatedSeries series_reciprocal(const TruncatedSeries& s);

/// outer(inner(z)) by Horner's scheme; throws Error(composition_domain) when
/// inner has a nonzero constant term.
TruncatedSeries series_compose(const TruncatedSeries& outer, const TruncatedSeries& inner);

/// Compositional inverse g of f (f(g(z)) = g(f(z)) = z), by Lagrange
/// inversion: g_n = (1/n) [w^{n-1}] (w / f(w))^n. Requires a_0 = 0 and
/// a_1 != 0, otherwise throws Error(non_invertible_series).
TruncatedSeries series_comp_inverse(const TruncatedSeries& f);

/// exp(s) for s with zero constant term.
TruncatedSeries series_exp(const TruncatedSeries& s);
/// log(s) for s with constant term 1.
TruncatedSeries series_log(const TruncatedSeries& s);

/// z + m_1 z^2 + ... + m_p z^{p+1}, of order p + 1.
TruncatedSeries g_series_from_moments(const MomentSequence& m);

struct RTransformChain {
  TruncatedSeries g;   // G(1/z), order p + 1
  TruncatedSeries l;   // its compositional inverse, order p + 1
  TruncatedSeries zk;  // z K(z) = 1 + a_1 z + ..., order p
  TruncatedSeries r;   // k_1 + k_2 z + ... + k_p z^{p-1}, order p - 1
};

/// Throws Error(validation) for p = 0.
RTransformChain r_transform_chain(const MomentSequence& m);
TruncatedSeries r_series_from_moments(const MomentSequence& m);
/// Inverse of r_series_from_moments: an order p - 1 series gives p moments.
MomentSequence moments_from_r_series(const TruncatedSeries& r);

/// Free cumulants read off an R-series.
CumulantSequence cumulants_of_r_series(const TruncatedSeries& r);
TruncatedSeries r_series_of_cumulants(const CumulantSequence& k);

struct SupportBound {
  Rational bound;              // 16 C
  Rational c;                  // C >= max_n |k_n|^{1/n}
  std::size_t argmax = 0;      // n attaining the maximum (0 when all vanish)
  bool exact = true;           // C is exactly the maximum, not a rounded-up bound
};

/// 16 C with C = max_n |k_n|^{1/n}; moments obey |m_n| <= (16 C)^n, so a law
/// whose R-transform is analytic at 0 with these cumulants lives in
/// [-16C, 16C]. When C is irrational it is rounded up to a dyadic rational.
SupportBound support_bound_from_cumulants(const CumulantSequence& k);

}  // namespace freemoments
