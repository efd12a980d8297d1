#pragma once

// Probability measures and finite positive measures: discrete atoms and the
// named densities (semicircle, Marchenko-Pastur, Cauchy, uniform). All
// parameters are exact rationals so that moments can be computed exactly;
// numeric paths convert on demand.

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "freemoments/numeric.hpp"
#include "freemoments/sequences.hpp"

namespace freemoments {

struct Atom {
  Rational location;
  Rational weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class DensityKind { semicircle, marchenko_pastur, cauchy, uniform };

std::string_view to_string(DensityKind kind) noexcept;

/// A named density scaled to total mass `mass`.
///   semicircle:       first = center m, second = radius r > 0
///   marchenko_pastur: first = rate lambda >= 1, second = jump size alpha > 0;
///                     the free Poisson law of alpha * X, X ~ MP(lambda)
///   cauchy:           first = center, second = scale > 0
///   uniform:          first = a, second = b, a < b
struct Density {
  DensityKind kind;
  Rational first;
  Rational second;
  Rational mass = 1;

  friend bool operator==(const Density&, const Density&) = default;
};

class Measure {
 public:
  /// Atoms at equal locations are merged; weights must be positive.
  static Measure discrete(std::vector<Atom> atoms);
  static Measure dirac(const Rational& location, const Rational& mass = 1);
  static Measure zero() { return Measure({}, std::nullopt); }
  static Measure semicircle(const Rational& center, const Rational& radius, const Rational& mass = 1);
  /// Free Poisson law of the given rate and jump size. Below rate 1 the law
  /// has an atom 1 - rate at 0 and its absolutely continuous part is
  /// rate * MP(1/rate, jump * rate), so the density parameter stays >= 1.
  static Measure marchenko_pastur(const Rational& rate, const Rational& jump = 1, const Rational& mass = 1);
  static Measure cauchy(const Rational& center, const Rational& scale, const Rational& mass = 1);
  static Measure uniform(const Rational& a, const Rational& b, const Rational& mass = 1);
  /// Atoms plus at most one density; validates every invariant.
  static Measure combine(std::vector<Atom> atoms, std::optional<Density> density);

  bool is_discrete() const noexcept { return !density_.has_value(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::optional<Density>& density() const noexcept { return density_; }

  Rational total_mass() const;
  bool has_compact_support() const noexcept;
  /// Convex hull of the support, when compact.
  std::optional<std::pair<Rational, Rational>> support_hull() const;
  /// max |t| over the support (as a double), when compact.
  std::optional<double> support_radius() const;

  /// Same atoms and density with every mass multiplied by `factor` > 0
  /// (factor 0 gives the zero measure).
  Measure scaled(const Rational& factor) const;

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  Measure(std::vector<Atom> atoms, std::optional<Density> density)
      : atoms_(std::move(atoms)), density_(std::move(density)) {}

  std::vector<Atom> atoms_;  // sorted by location, distinct locations
  std::optional<Density> density_;
};

/// Sum of two discrete measures; weights add at shared locations.
/// Throws Error(unsupported) when either has a density part.
Measure add_discrete(const Measure& a, const Measure& b);

/// Raw moments int t^i dmu(t), i = 1..p (moments of the law itself when the
/// total mass is 1). Throws Error(moment_does_not_exist) for a Cauchy part
/// and p >= 1.
MomentSequence moments(const Measure& mu, std::size_t p);

/// Same moments by adaptive quadrature, for cross-checks.
std::vector<double> quadrature_moments(const Measure& mu, std::size_t p);

template <class Real>
struct CauchyEvaluation {
  complex_t<Real> value;
  complex_t<Real> derivative;
};

/// G(z) = int dmu(t) / (z - t) and G'(z). Valid for Im z > 0, or for
/// compactly supported mu when |z| exceeds the support radius; otherwise
/// throws Error(domain). The semicircle and Cauchy parts use closed forms
/// (square-root branch chosen so that Im G < 0 on the upper half-plane), the
/// uniform and Marchenko-Pastur parts adaptive Gauss-Kronrod quadrature.
template <class Real>
CauchyEvaluation<Real> evaluate_cauchy_transform(const Measure& mu, const complex_t<Real>& z);

std::complex<double> cauchy_transform(const Measure& mu, std::complex<double> z);

/// Densities by quadrature only (semicircle included), for cross-checks.
std::complex<double> cauchy_transform_by_quadrature(const Measure& mu, std::complex<double> z);

struct RationalComplex {
  Rational re;
  Rational im;

  friend bool operator==(const RationalComplex&, const RationalComplex&) = default;
};

/// sum_j w_j / (z - t_j) in exact arithmetic; discrete measures only.
RationalComplex cauchy_transform_exact(const Measure& mu, const RationalComplex& z);

/// Half-line or interval window with explicit endpoint closure. A missing
/// bound is infinite. The default is half-open [lo, hi).
struct Window {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_closed = true;
  bool hi_closed = false;

  bool contains(const Rational& t) const;
};

/// Keeps the atoms inside the window. Throws Error(unsupported) for
/// measures with a density part.
Measure truncate_measure(const Measure& sigma, const Window& window);

}  // namespace freemoments
