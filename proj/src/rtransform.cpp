#include "freemoments/rtransform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include "freemoments/cumulants.hpp"
#include "freemoments/error.hpp"

namespace freemoments {

namespace {

using ExtendedMatrix = Eigen::Matrix<Extended, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
double epsilon_of() {
  return static_cast<double>(std::numeric_limits<Real>::epsilon());
}

double working_epsilon(Precision precision) {
  return precision == Precision::extended ? epsilon_of<Extended>() : epsilon_of<double>();
}

template <class Real>
struct NewtonOutcome {
  complex_t<Real> w;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
  std::string reason;
};

// Damped Newton for h(w) = G(1/w) = z, with h'(w) = -G'(1/w) / w^2. A step is
// halved until |h(w) - z| decreases and 1/w stays where G is defined.
template <class Real>
NewtonOutcome<Real> newton_invert(const Measure& mu, const complex_t<Real>& z, const complex_t<Real>& seed,
                                  int max_iterations) {
  using Complex = complex_t<Real>;
  using std::abs;
  const Real eps = std::numeric_limits<Real>::epsilon();
  // Quadrature-backed transforms are only accurate to about this relative level.
  const Real floor = std::is_same_v<Real, double> ? Real(1e-14) : Real(1e-40);
  auto evaluate = [&](const Complex& w, Complex& f, Complex& fp) {
    if (w == Complex(0)) return false;
    const Complex zeta = Complex(1) / w;
    try {
      const auto e = evaluate_cauchy_transform<Real>(mu, zeta);
      f = e.value - z;
      fp = -e.derivative / (w * w);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::domain) return false;
      throw;
    }
    using std::isfinite;
    return static_cast<bool>(isfinite(abs(f)));
  };

  NewtonOutcome<Real> out;
  Complex w = seed, f, fp;
  if (!evaluate(w, f, fp)) {
    out.reason = "seed outside the domain of G";
    return out;
  }
  const Real target = abs(z);
  for (int it = 0; it < max_iterations; ++it) {
    if (abs(f) <= floor * target) {
      out.converged = true;
      break;
    }
    if (fp == Complex(0)) {
      out.reason = "vanishing derivative";
      break;
    }
    Complex step = f / fp;
    // Trust region: L(z) is close to z, so a step longer than |w| / 2 only
    // sends 1/w toward the support of mu.
    if (abs(step) > abs(w) / 2) step *= Complex(abs(w) / (2 * abs(step)));
    Real lambda = 1;
    bool accepted = false;
    Complex wn, fn, fpn;
    for (int halving = 0; halving < 30; ++halving, lambda /= 2) {
      wn = w - Complex(lambda) * step;
      if (evaluate(wn, fn, fpn) && abs(fn) < abs(f)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No decrease at all: we sit at the rounding floor or the step left the domain.
      if (abs(f) <= 16 * floor * target) {
        out.converged = true;
      } else {
        out.reason = "line search failed";
      }
      break;
    }
    const Real moved = abs(wn - w);
    w = wn;
    f = fn;
    fp = fpn;
    if (moved <= 16 * eps * abs(w)) {
      out.converged = true;
      break;
    }
    if (it + 1 == max_iterations) out.reason = "iteration limit";
  }
  out.w = w;
  out.residual = static_cast<double>(abs(f));
  return out;
}

struct PointSolution {
  ExtendedComplex w;
  bool converged;
  double residual;
  std::string reason;
};

PointSolution solve_point(const Measure& mu, const ExtendedComplex& z, const ExtendedComplex& seed,
                          const InversionOptions& options) {
  if (options.precision == Precision::extended) {
    auto r = newton_invert<Extended>(mu, z, seed, options.max_iterations);
    return {r.w, r.converged, r.residual, r.reason};
  }
  auto r = newton_invert<double>(mu, to_double(z), to_double(seed), options.max_iterations);
  return {to_extended(r.w), r.converged, r.residual, r.reason};
}

struct Fit {
  std::vector<ExtendedComplex> c;
  /// Least-squares standard error, floored by the propagated sample noise.
  std::vector<Extended> uncertainty;
  Extended condition;
};

// Weighted real least squares in s = t / t_max, real and imaginary parts
// solved against the same QR factorization. `noise` is the absolute error of
// each sample.
Fit fit_polynomial(const std::vector<Extended>& s, const std::vector<ExtendedComplex>& values,
                   const std::vector<Extended>& weights, const std::vector<Extended>& noise, int degree) {
  const auto n = static_cast<Eigen::Index>(s.size());
  const Eigen::Index m = degree + 1;
  ExtendedMatrix a(n, m), b(n, 2);
  Extended noise_norm = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Extended power = weights[i];
    for (Eigen::Index k = 0; k < m; ++k) {
      a(i, k) = power;
      power *= s[i];
    }
    b(i, 0) = weights[i] * values[i].real();
    b(i, 1) = weights[i] * values[i].imag();
    noise_norm += weights[i] * weights[i] * noise[i] * noise[i];
  }
  noise_norm = sqrt(noise_norm);
  Eigen::HouseholderQR<ExtendedMatrix> qr(a);
  const ExtendedMatrix x = qr.solve(b);
  const ExtendedMatrix r = qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
  const ExtendedMatrix r_inv =
      r.template triangularView<Eigen::Upper>().solve(ExtendedMatrix::Identity(m, m));
  const ExtendedMatrix residual = a * x - b;
  const Extended dof = Extended(2 * (n - m));
  const Extended sigma = sqrt(residual.squaredNorm() / dof);

  Fit fit;
  fit.condition = r.norm() * r_inv.norm();
  for (Eigen::Index k = 0; k < m; ++k) {
    fit.c.emplace_back(x(k, 0), x(k, 1));
    fit.uncertainty.push_back(std::max(sigma, noise_norm) * r_inv.row(k).norm());
  }
  return fit;
}

}  // namespace

// ----------------------------------------------------------------------- ray

void NontangentialRay::validate() const {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw Error(ErrorCode::validation, "alpha must be positive");
  if (!(beta > 0) || !std::isfinite(beta)) throw Error(ErrorCode::validation, "beta must be positive");
  if (levels < 1 || levels > 400) throw Error(ErrorCode::validation, "levels must be in 1..400");
  if (!(std::abs(theta) < std::atan(alpha))) {
    throw Error(ErrorCode::validation, "ray angle must satisfy |tan theta| < alpha to stay in the cone");
  }
}

std::vector<double> NontangentialRay::radii() const {
  std::vector<double> out;
  for (int j = 1; j <= levels; ++j) out.push_back(std::ldexp(beta, -j));
  return out;
}

ExtendedComplex NontangentialRay::direction() const {
  const Extended th(theta);
  return {sin(th), -cos(th)};
}

bool NontangentialRay::contains(std::complex<double> z) const {
  return std::abs(z.real()) < -alpha * z.imag() && std::abs(z) < beta;
}

// ------------------------------------------------------------------ inversion

ExtendedComplex invert_g_at(const Measure& mu, const ExtendedComplex& z, const InversionOptions& options) {
  const auto sol = solve_point(mu, z, z, options);
  if (!sol.converged || !(sol.residual < options.tol)) {
    throw Error(ErrorCode::region_too_large,
                "Newton inversion did not converge (" + sol.reason + "); try a smaller beta");
  }
  return sol.w;
}

RayTransformSamples invert_g_on_ray(const Measure& mu, const NontangentialRay& ray, const InversionOptions& options) {
  ray.validate();
  if (!(options.tol > 0)) throw Error(ErrorCode::validation, "tolerance must be positive");
  RayTransformSamples out;
  out.ray = ray;
  out.precision = options.precision;
  const ExtendedComplex u = ray.direction();
  auto radii = ray.radii();
  std::reverse(radii.begin(), radii.end());  // smallest first

  bool have_previous = false;
  ExtendedComplex prev_z, prev_l;
  for (double t : radii) {
    const ExtendedComplex z = Extended(t) * u;
    // Continuation: L(z) ~ z near 0, so scale the last solution along the ray.
    const ExtendedComplex seed = have_previous ? prev_l * (z / prev_z) : z;
    auto sol = solve_point(mu, z, seed, options);
    if (!sol.converged && have_previous) {
      auto retry = solve_point(mu, z, z, options);
      if (retry.converged) sol = retry;
    }
    if (!sol.converged) {
      out.dropped.push_back({t, "Newton did not converge: " + sol.reason});
      continue;
    }
    if (!(sol.residual < options.tol)) {
      out.dropped.push_back({t, "residual " + std::to_string(sol.residual) + " above tolerance"});
      continue;
    }
    const ExtendedComplex k = ExtendedComplex(1) / sol.w;
    out.radii.push_back(t);
    out.z.push_back(z);
    out.L.push_back(sol.w);
    out.R.push_back(k - ExtendedComplex(1) / z);
    out.residuals.push_back(sol.residual);
    prev_z = z;
    prev_l = sol.w;
    have_previous = true;
  }
  if (out.z.empty()) {
    throw Error(ErrorCode::region_too_large, "no grid point could be inverted; try a smaller beta");
  }
  return out;
}

// ------------------------------------------------------------------ Taylor fit

TaylorEstimate estimate_taylor_on_ray(const RayTransformSamples& samples, std::size_t order,
                                      const TaylorOptions& options) {
  if (order == 0) throw Error(ErrorCode::validation, "order must be positive");
  if (options.extra_terms < 0) throw Error(ErrorCode::validation, "extra_terms must be nonnegative");
  const double eps = working_epsilon(samples.precision);
  const double upper = samples.ray.beta * options.fit_fraction;
  // R = K - 1/z inherits the relative accuracy of L divided by t.
  const bool extended = samples.precision == Precision::extended;
  const double relative_noise = extended ? 1e-40 : 1e-13;

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < samples.radii.size(); ++i) {
    if (samples.radii[i] < upper) rows.push_back(i);
  }
  // Largest radii last.
  std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return samples.radii[a] < samples.radii[b]; });
  const int degree = static_cast<int>(order) - 1 + options.extra_terms;
  const std::size_t needed = std::max<std::size_t>(3 * (order + 1), static_cast<std::size_t>(degree) + 6);
  if (rows.size() < needed) {
    throw Error(ErrorCode::insufficient_points, "the fit needs " + std::to_string(needed) + " retained points below " +
                                                    std::to_string(upper) + ", found " + std::to_string(rows.size()));
  }
  const double t_max = samples.radii[rows.back()];
  const double t_min = samples.radii[rows.front()];
  if (t_max / t_min < 100) {
    throw Error(ErrorCode::insufficient_points, "fit radii must span at least two decades");
  }

  auto fit_first = [&](std::size_t count) {
    std::vector<Extended> s, weights, noise;
    std::vector<ExtendedComplex> values;
    for (std::size_t r = 0; r < count; ++r) {
      const Extended t(samples.radii[rows[r]]);
      s.push_back(t / Extended(t_max));
      values.push_back(samples.R[rows[r]]);
      noise.push_back(Extended(relative_noise) * (abs(samples.R[rows[r]]) + 1 / t));
      // In double precision the noise ~ 1/t swamps the smallest radii, so
      // rows are weighted by t to even it out.
      weights.push_back(extended ? Extended(1) : s.back());
    }
    return fit_polynomial(s, values, weights, noise, degree);
  };
  const Fit full = fit_first(rows.size());
  const Fit minus2 = fit_first(rows.size() - 2);
  const Fit minus4 = fit_first(rows.size() - 4);

  // b_k = c_k / (u t_max)^k
  const ExtendedComplex scale = samples.ray.direction() * Extended(t_max);
  TaylorEstimate out;
  out.points_used = rows.size();
  out.condition = static_cast<double>(full.condition);
  out.ill_conditioned = out.condition * eps > 1e-6;
  ExtendedComplex power(1);
  for (std::size_t k = 0; k < order; ++k) {
    const ExtendedComplex b = full.c[k] / power;
    Extended spread = std::max(abs(minus2.c[k] - full.c[k]), abs(minus4.c[k] - full.c[k]));
    spread = std::max(spread, 3 * full.uncertainty[k]);
    const double stability = static_cast<double>(spread / abs(power));
    out.coefficients.push_back(to_double(b));
    out.stability.push_back(stability);
    const double magnitude = std::abs(out.coefficients.back());
    if (std::abs(out.coefficients.back().imag()) > std::max(1e-8 * std::max(1.0, magnitude), stability)) {
      out.real_coefficients = false;
    }
    power *= scale;
  }
  return out;
}

TaylorCheckReport verify_taylor_expansion(const Measure& mu, std::size_t order, const NontangentialRay& ray,
                                          double tol, const InversionOptions& inversion, const TaylorOptions& fit) {
  if (order == 0) throw Error(ErrorCode::validation, "order must be positive");
  return verify_taylor_expansion_against(mu, free_cumulants_from_moments(moments(mu, order)).k, ray, tol, inversion,
                                         fit);
}

TaylorCheckReport verify_taylor_expansion_against(const Measure& mu, const std::vector<Rational>& cumulants,
                                                  const NontangentialRay& ray, double tol,
                                                  const InversionOptions& inversion, const TaylorOptions& fit) {
  if (!(tol > 0)) throw Error(ErrorCode::validation, "tolerance must be positive");
  if (cumulants.empty()) throw Error(ErrorCode::validation, "order must be positive");
  const std::size_t order = cumulants.size();
  TaylorCheckReport report;
  report.order = order;
  report.tol = tol;
  report.exact_cumulants = cumulants;

  const auto samples = invert_g_on_ray(mu, ray, inversion);
  report.retained_points = samples.z.size();
  report.dropped = samples.dropped;
  for (double r : samples.residuals) report.max_residual = std::max(report.max_residual, r);

  // Left inverse: w on the ray, zeta = G(1/w) off the ray, then L(zeta) = w.
  for (std::size_t i = 0; i < samples.z.size(); i += 5) {
    const ExtendedComplex& w = samples.z[i];
    const ExtendedComplex zeta =
        inversion.precision == Precision::extended
            ? evaluate_cauchy_transform<Extended>(mu, ExtendedComplex(1) / w).value
            : to_extended(evaluate_cauchy_transform<double>(mu, to_double(ExtendedComplex(1) / w)).value);
    const auto sol = solve_point(mu, zeta, zeta, inversion);
    const double err = sol.converged ? static_cast<double>(abs(sol.w - w)) : std::numeric_limits<double>::infinity();
    report.left_inverse_error = std::max(report.left_inverse_error, err);
  }

  report.estimate = estimate_taylor_on_ray(samples, order, fit);
  for (std::size_t i = 0; i < order; ++i) {
    const std::complex<double> exact(report.exact_cumulants[i].get_d(), 0.0);
    const double d = std::abs(report.estimate.coefficients[i] - exact);
    report.deviations.push_back(d);
    report.max_deviation = std::max(report.max_deviation, d);
  }
  report.pass = report.max_deviation < tol;
  return report;
}

}  // namespace freemoments
