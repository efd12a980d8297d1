#include <cmath>
#include <complex>

#include <doctest.h>

#include "freemoments/error.hpp"
#include "freemoments/measures.hpp"
#include "test_support.hpp"

using namespace freemoments;
using freemoments::testing::rationals;
using namespace std::complex_literals;

namespace {

const double kPi = std::acos(-1.0);

// Composite midpoint rule on x = lo + (hi - lo) sin^2(t/2), enough for smooth
// integrands against the compact densities used here.
template <class F>
std::complex<double> midpoint_density(const Density& d, F g, int panels = 20000) {
  double lo, hi;
  double r = d.second.get_d();
  if (d.kind == DensityKind::semicircle) {
    lo = d.first.get_d() - r;
    hi = d.first.get_d() + r;
  } else if (d.kind == DensityKind::marchenko_pastur) {
    const double s = std::sqrt(d.first.get_d());
    lo = r * (1 - s) * (1 - s);
    hi = r * (1 + s) * (1 + s);
  } else {
    lo = d.first.get_d();
    hi = d.second.get_d();
  }
  const double w = hi - lo;
  auto f = [&](double t) -> std::complex<double> {
    const double s = std::sin(t / 2);
    const double x = lo + w * s * s;
    const double dx = w / 2 * std::sin(t);
    double density;
    if (d.kind == DensityKind::semicircle) {
      density = 2 / (kPi * r * r) * std::sqrt(std::max(0.0, (hi - x) * (x - lo)));
    } else if (d.kind == DensityKind::marchenko_pastur) {
      density = std::sqrt(std::max(0.0, (hi - x) * (x - lo))) / (2 * kPi * r * x);
    } else {
      density = 1 / w;
    }
    return g(x) * density * dx;
  };
  const double h = kPi / panels;
  std::complex<double> acc = 0;
  for (int i = 0; i < panels; ++i) acc += f((i + 0.5) * h);
  return acc * h;
}

std::vector<Measure> sample_measures() {
  return {
      Measure::dirac(0),
      Measure::discrete({{Rational(-1), Rational(1, 2)}, {Rational(2), Rational(3, 2)}}),
      Measure::semicircle(0, 2),
      Measure::semicircle(Rational(1, 2), 3, 5),
      Measure::marchenko_pastur(1),
      Measure::marchenko_pastur(3, Rational(1, 2)),
      Measure::marchenko_pastur(Rational(1, 3)),
      Measure::cauchy(0, 1),
      Measure::cauchy(1, Rational(1, 4), 2),
      Measure::uniform(-1, 3),
      Measure::combine({{Rational(4), Rational(1)}}, Density{DensityKind::uniform, Rational(0), Rational(1), Rational(2)}),
  };
}

}  // namespace

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(Measure::discrete({{Rational(0), Rational(0)}}), Error);
  CHECK_THROWS_AS(Measure::semicircle(0, 0), Error);
  CHECK_THROWS_AS(Measure::uniform(1, 1), Error);
  CHECK_THROWS_AS(Measure::cauchy(0, -1), Error);
  CHECK_THROWS_AS(Measure::combine({}, Density{DensityKind::marchenko_pastur, Rational(1, 2), Rational(1), Rational(1)}), Error);
  auto merged = Measure::discrete({{Rational(1), Rational(1)}, {Rational(0), Rational(2)}, {Rational(1), Rational(1, 2)}});
  REQUIRE(merged.atoms().size() == 2);
  CHECK(merged.atoms()[0].location == 0);
  CHECK(merged.atoms()[1].weight == Rational(3, 2));
  CHECK(merged.total_mass() == Rational(7, 2));
  auto mp = Measure::marchenko_pastur(Rational(1, 4));
  CHECK(mp.total_mass() == 1);
  CHECK(mp.atoms().at(0).weight == Rational(3, 4));
}

TEST_CASE("exact moments") {
  CHECK(moments(Measure::dirac(3), 3).m == rationals({3, 9, 27}));
  CHECK(moments(Measure::semicircle(0, 2), 6).m == rationals({0, 1, 0, 2, 0, 5}));
  // free Poisson(1): Catalan numbers
  CHECK(moments(Measure::marchenko_pastur(1), 4).m == rationals({1, 2, 5, 14}));
  // rate 2: m = (2, 6, 22)
  CHECK(moments(Measure::marchenko_pastur(2), 3).m == rationals({2, 6, 22}));
  // rate 1/2 through the atom at 0 keeps the Narayana moments: (1/2, 3/4, 9/8)
  CHECK(moments(Measure::marchenko_pastur(Rational(1, 2)), 3).m ==
        std::vector<Rational>{Rational(1, 2), Rational(3, 4), Rational(11, 8)});
  CHECK(moments(Measure::uniform(0, 1), 3).m == std::vector<Rational>{Rational(1, 2), Rational(1, 3), Rational(1, 4)});
  // unnormalized measures give raw integrals
  CHECK(moments(Measure::dirac(2, 3), 2).m == rationals({6, 12}));
  CHECK(moments(Measure::cauchy(0, 1), 0).m.empty());
  try {
    moments(Measure::cauchy(0, 1), 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::moment_does_not_exist);
  }
}

TEST_CASE("exact moments agree with quadrature") {
  for (const auto& mu : sample_measures()) {
    if (!mu.has_compact_support()) continue;
    const auto exact = moments(mu, 8);
    const auto quad = quadrature_moments(mu, 8);
    for (unsigned k = 1; k <= 8; ++k) {
      const double e = exact(k).get_d();
      CHECK(std::abs(quad[k - 1] - e) <= 1e-10 * std::max(1.0, std::abs(e)));
      if (mu.density()) {
        const double atoms_part = [&] {
          double a = 0;
          for (const auto& atom : mu.atoms()) a += atom.weight.get_d() * std::pow(atom.location.get_d(), k);
          return a;
        }();
        const double midpoint =
            atoms_part + mu.density()->mass.get_d() *
                             midpoint_density(*mu.density(), [k](double x) { return std::pow(x, k); }).real();
        CHECK(std::abs(midpoint - e) <= 1e-8 * std::max(1.0, std::abs(e)));
      }
    }
  }
}

TEST_CASE("Cauchy transform examples") {
  CHECK(std::abs(cauchy_transform(Measure::dirac(0), 1i) - (-1i)) < 1e-15);
  for (double y : {0.5, 1.0, 3.0, 100.0}) {
    const auto g = cauchy_transform(Measure::cauchy(0, 1), y * 1i);
    CHECK(std::abs(g - 1.0 / (1i * (y + 1))) < 1e-14);
  }
  const auto g = cauchy_transform(Measure::semicircle(0, 2), 2i);
  CHECK(std::abs(g - 1i * (1 - std::sqrt(2.0))) < 1e-14);
  CHECK(std::abs(cauchy_transform_by_quadrature(Measure::semicircle(0, 2), 2i) - g) < 1e-12);
  // Cauchy density against the quadrature of dx / (pi (1 + x^2)) on a tan grid
  {
    const std::complex<double> z = 0.3 + 0.7i;
    std::complex<double> acc = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double t = -kPi / 2 + (i + 0.5) * kPi / n;
      acc += 1.0 / (z - std::tan(t)) / kPi * (kPi / n);
    }
    CHECK(std::abs(cauchy_transform(Measure::cauchy(0, 1), z) - acc) < 1e-8);
  }
}

TEST_CASE("Cauchy transform domain") {
  CHECK_THROWS_AS(cauchy_transform(Measure::cauchy(0, 1), -1i), Error);
  CHECK_THROWS_AS(cauchy_transform(Measure::semicircle(0, 2), std::complex<double>(1, 0)), Error);
  const auto outside = cauchy_transform(Measure::semicircle(0, 2), std::complex<double>(3, 0));
  CHECK(std::abs(outside - (3 - std::sqrt(5.0)) / 2) < 1e-14);
  CHECK_THROWS_AS(cauchy_transform(Measure::semicircle(0, 2), std::complex<double>(0.5, -0.5)), Error);
  const auto below = cauchy_transform(Measure::semicircle(0, 2), std::complex<double>(2.5, -0.5));
  const auto above = cauchy_transform(Measure::semicircle(0, 2), std::complex<double>(2.5, 0.5));
  CHECK(std::abs(below - std::conj(above)) < 1e-14);
}

TEST_CASE("Herglotz property and mass asymptotics") {
  for (const auto& mu : sample_measures()) {
    for (double x : {-5.0, -1.0, -0.3, 0.0, 0.7, 2.0, 6.0}) {
      for (double y : {1e-2, 0.1, 1.0, 10.0}) {
        CHECK(cauchy_transform(mu, {x, y}).imag() < 0);
      }
    }
    const double mass = mu.total_mass().get_d();
    for (double y : {1e2, 1e3, 1e4}) {
      const auto value = cauchy_transform(mu, {0, y}) * std::complex<double>(0, y);
      CHECK(std::abs(value - mass) <= 10 * mass / y);
    }
  }
}

TEST_CASE("closed forms and quadrature agree with an independent rule") {
  for (const auto& mu : sample_measures()) {
    if (!mu.density() || mu.density()->kind == DensityKind::cauchy) continue;
    for (std::complex<double> z : {0.5 + 1.0i, -0.2 + 0.05i, 2.0 + 0.3i, 7.0 + 2.0i}) {
      std::complex<double> expected = 0;
      for (const auto& a : mu.atoms()) expected += a.weight.get_d() / (z - a.location.get_d());
      expected += mu.density()->mass.get_d() *
                  midpoint_density(*mu.density(), [z](double x) { return 1.0 / (z - x); }, 400000);
      const auto g = cauchy_transform(mu, z);
      CHECK(std::abs(g - expected) <= 1e-6 * std::abs(expected));
      CHECK(std::abs(cauchy_transform_by_quadrature(mu, z) - g) <= 1e-11 * std::abs(g));
    }
  }
}

TEST_CASE("derivative matches a finite difference") {
  for (const auto& mu : sample_measures()) {
    const std::complex<double> z = 0.4 + 0.8i;
    const auto eval = evaluate_cauchy_transform<double>(mu, z);
    const double h = 1e-5;
    const auto fd = (cauchy_transform(mu, z + h) - cauchy_transform(mu, z - h)) / (2 * h);
    CHECK(std::abs(eval.derivative - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("extended precision agrees with double") {
  for (const auto& mu : sample_measures()) {
    const ExtendedComplex z(Extended("0.4"), Extended("0.8"));
    const auto ext = evaluate_cauchy_transform<Extended>(mu, z);
    const auto dbl = cauchy_transform(mu, 0.4 + 0.8i);
    CHECK(std::abs(static_cast<double>(ext.value.real()) - dbl.real()) < 1e-13);
    CHECK(std::abs(static_cast<double>(ext.value.imag()) - dbl.imag()) < 1e-13);
  }
  // semicircle(0,2) at 2i is i(1 - sqrt 2) to far beyond double precision
  const auto g = evaluate_cauchy_transform<Extended>(Measure::semicircle(0, 2), ExtendedComplex(0, 2)).value;
  const Extended err = abs(g.imag() - (1 - sqrt(Extended(2))));
  CHECK(err < Extended("1e-45"));
  // quadrature in extended precision: uniform(0,1) at i is -i log... compare against log form
  const ExtendedComplex z(Extended(0), Extended(1));
  const auto u = evaluate_cauchy_transform<Extended>(Measure::uniform(0, 1), z).value;
  const ExtendedComplex closed = log(z) - log(z - ExtendedComplex(1));
  CHECK(abs(u - closed) < Extended("1e-38"));
}

TEST_CASE("exact discrete Cauchy transform") {
  const auto mu = Measure::discrete({{Rational(-1), Rational(1, 3)}, {Rational(2), Rational(2, 3)}});
  const RationalComplex z{Rational(1, 2), Rational(3)};
  const auto g = cauchy_transform_exact(mu, z);
  // 1/(z - t) = ((x - t) - i y) / ((x - t)^2 + y^2)
  const Rational re = Rational(1, 3) * Rational(3, 2) / (Rational(9, 4) + 9) + Rational(2, 3) * Rational(-3, 2) / (Rational(9, 4) + 9);
  const Rational im = -(Rational(1, 3) * 3 / (Rational(9, 4) + 9) + Rational(2, 3) * 3 / (Rational(9, 4) + 9));
  CHECK(g.re == re);
  CHECK(g.im == im);
  const auto approx = cauchy_transform(mu, {0.5, 3.0});
  CHECK(std::abs(approx.real() - g.re.get_d()) < 1e-15);
  CHECK(std::abs(approx.imag() - g.im.get_d()) < 1e-15);
  CHECK_THROWS_AS(cauchy_transform_exact(mu, {Rational(2), Rational(0)}), Error);
  CHECK_THROWS_AS(cauchy_transform_exact(Measure::semicircle(0, 1), z), Error);
}

TEST_CASE("truncation windows") {
  const auto sigma = Measure::discrete({{Rational(-2), Rational(1)}, {Rational(1, 2), Rational(1)}, {Rational(3), Rational(1)}});
  const auto kept = truncate_measure(sigma, Window{Rational(-1), Rational(1), true, true});
  CHECK(kept == Measure::discrete({{Rational(1, 2), Rational(1)}}));
  CHECK(truncate_measure(sigma, Window{}) == sigma);
  const auto two = Measure::discrete({{Rational(1), Rational(1)}, {Rational(2), Rational(1)}});
  CHECK(truncate_measure(two, Window{Rational(1), std::nullopt, false, false}) == Measure::discrete({{Rational(2), Rational(1)}}));
  // default half-open [lo, hi)
  CHECK(truncate_measure(two, Window{Rational(1), Rational(2)}) == Measure::discrete({{Rational(1), Rational(1)}}));
  try {
    truncate_measure(Measure::semicircle(0, 1), Window{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported);
  }
}

TEST_CASE("discrete addition and scaling") {
  const auto a = Measure::discrete({{Rational(1), Rational(1)}});
  const auto b = Measure::discrete({{Rational(1), Rational(2)}, {Rational(0), Rational(1)}});
  const auto sum = add_discrete(a, b);
  CHECK(sum.total_mass() == 4);
  CHECK(sum.atoms().size() == 2);
  CHECK_THROWS_AS(add_discrete(a, Measure::semicircle(0, 1)), Error);
  CHECK(a.scaled(Rational(1, 2)).total_mass() == Rational(1, 2));
  CHECK(Measure::semicircle(0, 1).scaled(3).total_mass() == 3);
  CHECK(*Measure::semicircle(1, 2).support_radius() == doctest::Approx(3));
  CHECK(!Measure::cauchy(0, 1).support_radius());
}
