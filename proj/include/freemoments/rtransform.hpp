#pragma once

// Numeric R-transform on a nontangential ray: z = t e^{-i pi/2 + i theta},
// 0 < t < beta, inside the cone |Re z| < -alpha Im z.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "freemoments/measures.hpp"
#include "freemoments/numeric.hpp"
#include "freemoments/rational.hpp"

namespace freemoments {

struct NontangentialRay {
  double alpha = 1.0;
  double beta = 0.1;
  double theta = 0.0;
  /// Radii are beta * 2^-j for j = 1..levels.
  int levels = 40;

  /// Throws validation if the ray leaves the cone or the grid is empty.
  void validate() const;
  std::vector<double> radii() const;
  /// Unit direction e^{-i pi/2 + i theta}.
  ExtendedComplex direction() const;
  bool contains(std::complex<double> z) const;
};

struct DroppedPoint {
  double radius;
  std::string reason;
};

struct RayTransformSamples {
  NontangentialRay ray;
  Precision precision = Precision::extended;
  std::vector<double> radii;
  std::vector<ExtendedComplex> z;
  std::vector<ExtendedComplex> L;
  std::vector<ExtendedComplex> R;
  /// |G(1/L(z)) - z| per retained point.
  std::vector<double> residuals;
  std::vector<DroppedPoint> dropped;
};

struct InversionOptions {
  double tol = 1e-12;
  Precision precision = Precision::extended;
  int max_iterations = 200;
};

/// Solves G(1/w) = z along the ray by damped Newton continuation from the
/// smallest radius outward. Points that do not converge are dropped.
RayTransformSamples invert_g_on_ray(const Measure& mu, const NontangentialRay& ray,
                                    const InversionOptions& options = {});

/// Solves G(1/w) = z at a single point from the seed w = z.
ExtendedComplex invert_g_at(const Measure& mu, const ExtendedComplex& z, const InversionOptions& options = {});

struct TaylorOptions {
  /// Only radii below beta * fit_fraction enter the fit.
  double fit_fraction = 0.01;
  /// Polynomial degree is order - 1 + extra_terms.
  int extra_terms = 4;
};

struct TaylorEstimate {
  std::vector<std::complex<double>> coefficients;
  /// Per-coefficient spread across nested sub-grid fits, floored by the
  /// least-squares standard error.
  std::vector<double> stability;
  double condition = 0;
  bool ill_conditioned = false;
  bool real_coefficients = true;
  std::size_t points_used = 0;
};

/// Least-squares fit of R(z) = sum_{i<p} b_i z^i on the small radii.
TaylorEstimate estimate_taylor_on_ray(const RayTransformSamples& samples, std::size_t order,
                                      const TaylorOptions& options = {});

struct TaylorCheckReport {
  std::size_t order = 0;
  TaylorEstimate estimate;
  std::vector<Rational> exact_cumulants;
  std::vector<double> deviations;
  double max_deviation = 0;
  double tol = 0;
  bool pass = false;
  std::size_t retained_points = 0;
  std::vector<DroppedPoint> dropped;
  double max_residual = 0;
  /// Largest |L(G(1/w)) - w| over the left-inverse spot checks.
  double left_inverse_error = 0;
};

/// Compares the ray estimate of R's Taylor coefficients with the exact free
/// cumulants k_1..k_p of mu.
TaylorCheckReport verify_taylor_expansion(const Measure& mu, std::size_t order, const NontangentialRay& ray,
                                          double tol, const InversionOptions& inversion = {},
                                          const TaylorOptions& fit = {});

/// Same comparison against caller-supplied cumulants k_1..k_p.
TaylorCheckReport verify_taylor_expansion_against(const Measure& mu, const std::vector<Rational>& cumulants,
                                                  const NontangentialRay& ray, double tol,
                                                  const InversionOptions& inversion = {},
                                                  const TaylorOptions& fit = {});

}  // namespace freemoments
