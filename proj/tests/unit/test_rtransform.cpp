#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "freemoments/cumulants.hpp"
#include "freemoments/error.hpp"
#include "freemoments/rtransform.hpp"
#include "test_support.hpp"

using namespace freemoments;
using namespace std::complex_literals;

namespace {

std::complex<double> as_double(const ExtendedComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

Measure two_point() { return Measure::discrete({{Rational(-1), Rational(1, 2)}, {Rational(1), Rational(1, 2)}}); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::validation;
}

}  // namespace

TEST_CASE("ray geometry") {
  NontangentialRay ray;
  ray.validate();
  const auto radii = ray.radii();
  REQUIRE(radii.size() == 40);
  CHECK(radii.front() == doctest::Approx(0.05));
  for (double theta : {0.0, 0.3, -0.7}) {
    ray.theta = theta;
    for (double t : ray.radii()) CHECK(ray.contains(as_double(Extended(t) * ray.direction())));
  }
  // |Re z| < -alpha Im z on the ray means |tan theta| < alpha
  ray.alpha = 0.5;
  ray.theta = std::atan(0.5);
  CHECK(code_of([&] { ray.validate(); }) == ErrorCode::validation);
  ray.theta = 0.46;
  ray.validate();
  ray.beta = 0;
  CHECK(code_of([&] { ray.validate(); }) == ErrorCode::validation);
}

TEST_CASE("Dirac mass: L = z / (1 + a z), R = a") {
  const auto samples = invert_g_on_ray(Measure::dirac(3), NontangentialRay{});
  CHECK(samples.z.size() == 40);
  for (std::size_t i = 0; i < samples.z.size(); ++i) {
    const ExtendedComplex& z = samples.z[i];
    const auto expected = z / (ExtendedComplex(1) + ExtendedComplex(3) * z);
    CHECK(std::abs(as_double(samples.L[i] - expected)) <= 1e-40 * std::abs(as_double(z)));
    CHECK(std::abs(as_double(samples.R[i]) - 3.0) < 1e-25);
    CHECK(samples.residuals[i] < 1e-12);
  }
  const auto est = estimate_taylor_on_ray(samples, 3);
  CHECK(std::abs(est.coefficients[0] - 3.0) < 1e-10);
  CHECK(std::abs(est.coefficients[1]) < 1e-10);
  CHECK(std::abs(est.coefficients[2]) < 1e-10);
  CHECK(est.real_coefficients);
}

TEST_CASE("Cauchy law: R = -i, a non-real constant") {
  NontangentialRay ray;
  ray.theta = 0.2;
  const auto samples = invert_g_on_ray(Measure::cauchy(0, 1), ray);
  CHECK(samples.dropped.empty());
  for (std::size_t i = 0; i < samples.z.size(); ++i) {
    CHECK(std::abs(as_double(samples.R[i]) - (-1i)) < 1e-8);
  }
  const auto est = estimate_taylor_on_ray(samples, 1);
  CHECK(std::abs(est.coefficients[0].imag()) > 0.999);
  CHECK(!est.real_coefficients);
}

TEST_CASE("semicircle: R(z) = z") {
  const auto samples = invert_g_on_ray(Measure::semicircle(0, 2), NontangentialRay{});
  for (std::size_t i = 0; i < samples.z.size(); ++i) {
    CHECK(std::abs(as_double(samples.R[i] - samples.z[i])) < 1e-12);
  }
  const auto est = estimate_taylor_on_ray(samples, 2);
  CHECK(std::abs(est.coefficients[0]) < 1e-6);
  CHECK(std::abs(est.coefficients[1] - 1.0) < 1e-6);
}

TEST_CASE("Taylor coefficients match the exact free cumulants") {
  NontangentialRay ray;
  {
    const auto rep = verify_taylor_expansion(Measure::semicircle(0, 2), 4, ray, 1e-6);
    CHECK(rep.pass);
    CHECK(rep.exact_cumulants == testing::rationals({0, 1, 0, 0}));
  }
  {
    const auto rep = verify_taylor_expansion(two_point(), 4, ray, 1e-6);
    CHECK(rep.pass);
    CHECK(rep.exact_cumulants == testing::rationals({0, 1, 0, -1}));
  }
  {
    const auto rep = verify_taylor_expansion(Measure::marchenko_pastur(1), 4, ray, 1e-5);
    CHECK(rep.pass);
    CHECK(rep.exact_cumulants == testing::rationals({1, 1, 1, 1}));
    CHECK(rep.max_deviation < 1e-12);
  }
  {
    // a random five-atom measure; its support radius sets how small beta must be
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<int> loc(-20, 20), weight(1, 9);
    std::vector<Atom> atoms;
    for (int i = 0; i < 5; ++i) atoms.push_back({Rational(loc(rng), 10), Rational(weight(rng))});
    Rational total = 0;
    for (const auto& a : atoms) total += a.weight;
    for (auto& a : atoms) a.weight /= total;
    const auto mu = Measure::discrete(atoms);
    const auto rep = verify_taylor_expansion(mu, 5, ray, 1e-6);
    CHECK(rep.pass);
    CHECK(rep.retained_points == 40);
  }
}

TEST_CASE("right and left inverse residuals") {
  const double tol = 1e-12;
  for (const auto& mu : {Measure::semicircle(1, 1), Measure::marchenko_pastur(2), Measure::uniform(-1, 2), two_point()}) {
    NontangentialRay ray;
    ray.theta = -0.3;
    const auto rep = verify_taylor_expansion(mu, 3, ray, 1e-6, {tol});
    CHECK(rep.pass);
    CHECK(rep.max_residual < tol);
    CHECK(rep.left_inverse_error < 10 * tol);
    // recheck the right inverse independently of the solver
    const auto samples = invert_g_on_ray(mu, ray, {tol});
    for (std::size_t i = 0; i < samples.z.size(); i += 7) {
      const auto back = evaluate_cauchy_transform<Extended>(mu, ExtendedComplex(1) / samples.L[i]).value;
      CHECK(std::abs(as_double(back - samples.z[i])) < tol);
    }
  }
}

TEST_CASE("cone stability and shrinking beta") {
  for (const auto& mu : {Measure::marchenko_pastur(1), Measure::uniform(-1, 2), two_point()}) {
    NontangentialRay a, b;
    a.theta = 0.0;
    b.theta = 0.6;
    const auto ea = estimate_taylor_on_ray(invert_g_on_ray(mu, a), 4);
    const auto eb = estimate_taylor_on_ray(invert_g_on_ray(mu, b), 4);
    NontangentialRay half;
    half.beta = a.beta / 2;
    const auto eh = estimate_taylor_on_ray(invert_g_on_ray(mu, half), 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const double stab = std::max(ea.stability[i], eb.stability[i]);
      CHECK(std::abs(ea.coefficients[i] - eb.coefficients[i]) <= stab);
      CHECK(std::abs(ea.coefficients[i] - eh.coefficients[i]) <= std::max(ea.stability[i], eh.stability[i]));
      CHECK(ea.stability[i] < 1e-8);
    }
  }
}

TEST_CASE("failed points are dropped and reported") {
  // |G| <= 1 for the semicircle of radius 2, so |z| >= 1 cannot be reached.
  NontangentialRay ray;
  ray.beta = 4;
  const auto samples = invert_g_on_ray(Measure::semicircle(0, 2), ray, {1e-12});
  CHECK(samples.dropped.size() >= 2);
  CHECK(samples.dropped.size() + samples.z.size() == 40);
  for (const auto& d : samples.dropped) {
    CHECK(d.radius >= 1.0);
    CHECK(!d.reason.empty());
  }
  for (double r : samples.residuals) CHECK(r < 1e-12);

  ray.beta = 100;
  ray.levels = 5;
  CHECK(code_of([&] { invert_g_on_ray(Measure::semicircle(0, 2), ray); }) == ErrorCode::region_too_large);
  CHECK(is_numeric_failure(ErrorCode::region_too_large));
}

TEST_CASE("fit preconditions") {
  NontangentialRay ray;
  ray.levels = 10;
  const auto samples = invert_g_on_ray(Measure::dirac(1), ray);
  CHECK(code_of([&] { estimate_taylor_on_ray(samples, 3); }) == ErrorCode::insufficient_points);
  CHECK(code_of([&] { estimate_taylor_on_ray(samples, 0); }) == ErrorCode::validation);
  CHECK(code_of([&] { verify_taylor_expansion(Measure::cauchy(0, 1), 2, NontangentialRay{}, 1e-6); }) ==
        ErrorCode::moment_does_not_exist);
}

TEST_CASE("double precision path") {
  InversionOptions options;
  options.precision = Precision::double_precision;
  const auto samples = invert_g_on_ray(Measure::semicircle(0, 2), NontangentialRay{}, options);
  CHECK(samples.dropped.empty());
  const auto est = estimate_taylor_on_ray(samples, 2);
  CHECK(std::abs(est.coefficients[0]) < 1e-6);
  CHECK(std::abs(est.coefficients[1] - 1.0) < 1e-4);
  const auto dirac = estimate_taylor_on_ray(invert_g_on_ray(Measure::dirac(2), NontangentialRay{}, options), 1);
  CHECK(std::abs(dirac.coefficients[0] - 2.0) < 1e-8);
}
