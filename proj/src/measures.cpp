#include "freemoments/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "freemoments/error.hpp"

namespace freemoments {

std::string_view to_string(DensityKind kind) noexcept {
  switch (kind) {
    case DensityKind::semicircle: return "semicircle";
    case DensityKind::marchenko_pastur: return "marchenko_pastur";
    case DensityKind::cauchy: return "cauchy";
    case DensityKind::uniform: return "uniform";
  }
  return "unknown";
}

namespace {

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
  for (auto& a : atoms) {
    a.location.canonicalize();
    a.weight.canonicalize();
    if (a.weight <= 0) throw Error(ErrorCode::validation, "atom weights must be positive");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> merged;
  for (auto& a : atoms) {
    if (!merged.empty() && merged.back().location == a.location) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(std::move(a));
    }
  }
  return merged;
}

void validate_density(const Density& d) {
  if (d.mass <= 0) throw Error(ErrorCode::validation, "density mass must be positive");
  switch (d.kind) {
    case DensityKind::semicircle:
      if (d.second <= 0) throw Error(ErrorCode::validation, "semicircle radius must be positive");
      break;
    case DensityKind::marchenko_pastur:
      if (d.first < 1) throw Error(ErrorCode::validation, "Marchenko-Pastur density needs rate >= 1 (add the atom at 0 below rate 1)");
      if (d.second <= 0) throw Error(ErrorCode::validation, "Marchenko-Pastur jump size must be positive");
      break;
    case DensityKind::cauchy:
      if (d.second <= 0) throw Error(ErrorCode::validation, "Cauchy scale must be positive");
      break;
    case DensityKind::uniform:
      if (!(d.first < d.second)) throw Error(ErrorCode::validation, "uniform density needs a < b");
      break;
  }
}

// Normalized moment of order k of a density, exactly.
Rational density_moment(const Density& d, unsigned k) {
  switch (d.kind) {
    case DensityKind::semicircle: {
      const Rational half = d.second / 2;
      Rational acc = 0;
      for (unsigned j = 0; j <= k; j += 2) {
        acc += Rational(binomial(k, j) * catalan(j / 2)) * pow(d.first, k - j) * pow(half, j);
      }
      return acc;
    }
    case DensityKind::marchenko_pastur: {
      // Narayana numbers N(k, j) = C(k, j) C(k, j - 1) / k.
      if (k == 0) return 1;
      Rational acc = 0;
      for (unsigned j = 1; j <= k; ++j) {
        acc += Rational(binomial(k, j) * binomial(k, j - 1) / k) * pow(d.first, j);
      }
      return acc * pow(d.second, k);
    }
    case DensityKind::uniform:
      return (pow(d.second, k + 1) - pow(d.first, k + 1)) / (Rational(k + 1) * (d.second - d.first));
    case DensityKind::cauchy:
      if (k == 0) return 1;
      throw Error(ErrorCode::moment_does_not_exist, "the Cauchy law has no moment of order " + std::to_string(k));
  }
  return 0;
}

template <class Real>
struct Interval {
  Real lo, hi;
};

// Support of a compact density as reals.
template <class Real>
Interval<Real> density_support(const Density& d) {
  using std::sqrt;
  switch (d.kind) {
    case DensityKind::semicircle:
      return {to_real<Real>(d.first - d.second), to_real<Real>(d.first + d.second)};
    case DensityKind::marchenko_pastur: {
      const Real root = sqrt(to_real<Real>(d.first));
      const Real jump = to_real<Real>(d.second);
      return {jump * (1 - root) * (1 - root), jump * (1 + root) * (1 + root)};
    }
    case DensityKind::uniform:
      return {to_real<Real>(d.first), to_real<Real>(d.second)};
    case DensityKind::cauchy:
      break;
  }
  throw Error(ErrorCode::unsupported, "density without compact support");
}

template <class Real>
Real quadrature_tolerance() {
  if constexpr (std::is_same_v<Real, double>) {
    return 1e-13;
  } else {
    return Real(1e-42);
  }
}

template <class Real>
constexpr unsigned quadrature_depth() {
  return std::is_same_v<Real, double> ? 15u : 12u;
}

template <class Real, class F>
auto integrate(F f, const Real& a, const Real& b) {
  Real error;
  return boost::math::quadrature::gauss_kronrod<Real, 31>::integrate(f, a, b, quadrature_depth<Real>(),
                                                                    quadrature_tolerance<Real>(), &error);
}

// Integrates g(x) f(x) dx over a compact density, where f is the normalized
// density. Square-root endpoints are removed by x = lo + (hi - lo) sin^2(t/2),
// t in [0, pi]; the range is split at `split` when it sits well inside the
// support (pass something outside the support to disable splitting).
template <class Real, class G>
auto integrate_density(const Density& d, G g, Real split) {
  using std::asin;
  using std::sin;
  using std::sqrt;
  const Real pi = boost::math::constants::pi<Real>();
  const auto [lo, hi] = density_support<Real>(d);
  const Real width = hi - lo;
  if (split - lo < width / 1000 || hi - split < width / 1000) split = lo;
  if (d.kind == DensityKind::uniform) {
    auto f = [&](const Real& x) { return g(x) / width; };
    if (split > lo && split < hi) return integrate<Real>(f, lo, split) + integrate<Real>(f, split, hi);
    return integrate<Real>(f, lo, hi);
  }
  Real scale;
  if (d.kind == DensityKind::semicircle) {
    const Real r = to_real<Real>(d.second);
    scale = Real(2) / (pi * r * r);
  } else {
    scale = Real(1) / (2 * pi * to_real<Real>(d.second));
  }
  // sqrt((hi - x)(x - lo)) dx = (width / 2)^2 sin^2 t dt
  auto f = [&, lo = lo, width = width](const Real& t) {
    const Real s = sin(t / 2);
    const Real x = lo + width * s * s;
    const Real st = sin(t);
    Real weight = width * width / 4 * st * st * scale;
    if (d.kind == DensityKind::marchenko_pastur) weight /= x;
    return g(x) * weight;
  };
  if (split > lo && split < hi) {
    const Real t_split = 2 * asin(sqrt((split - lo) / width));
    return integrate<Real>(f, Real(0), t_split) + integrate<Real>(f, t_split, pi);
  }
  return integrate<Real>(f, Real(0), pi);
}

template <class Complex>
auto re(const Complex& z) {
  using std::real;
  return real(z);
}
template <class Complex>
auto im(const Complex& z) {
  using std::imag;
  return imag(z);
}

}  // namespace

// ------------------------------------------------------------------- Measure

Measure Measure::discrete(std::vector<Atom> atoms) { return combine(std::move(atoms), std::nullopt); }

Measure Measure::dirac(const Rational& location, const Rational& mass) { return discrete({{location, mass}}); }

Measure Measure::semicircle(const Rational& center, const Rational& radius, const Rational& mass) {
  return combine({}, Density{DensityKind::semicircle, center, radius, mass});
}

Measure Measure::marchenko_pastur(const Rational& rate, const Rational& jump, const Rational& mass) {
  if (rate <= 0) throw Error(ErrorCode::validation, "Marchenko-Pastur rate must be positive");
  if (rate >= 1) return combine({}, Density{DensityKind::marchenko_pastur, rate, jump, mass});
  return combine({{Rational(0), (1 - rate) * mass}},
                 Density{DensityKind::marchenko_pastur, 1 / rate, jump * rate, rate * mass});
}

Measure Measure::cauchy(const Rational& center, const Rational& scale, const Rational& mass) {
  return combine({}, Density{DensityKind::cauchy, center, scale, mass});
}

Measure Measure::uniform(const Rational& a, const Rational& b, const Rational& mass) {
  return combine({}, Density{DensityKind::uniform, a, b, mass});
}

Measure Measure::combine(std::vector<Atom> atoms, std::optional<Density> density) {
  if (density) {
    density->first.canonicalize();
    density->second.canonicalize();
    density->mass.canonicalize();
    validate_density(*density);
  }
  return Measure(normalize_atoms(std::move(atoms)), std::move(density));
}

Rational Measure::total_mass() const {
  Rational total = density_ ? density_->mass : Rational(0);
  for (const auto& a : atoms_) total += a.weight;
  return total;
}

bool Measure::has_compact_support() const noexcept {
  return !density_ || density_->kind != DensityKind::cauchy;
}

std::optional<std::pair<Rational, Rational>> Measure::support_hull() const {
  if (!has_compact_support()) return std::nullopt;
  std::optional<std::pair<Rational, Rational>> hull;
  auto extend = [&](const Rational& lo, const Rational& hi) {
    if (!hull) {
      hull = std::pair{lo, hi};
    } else {
      hull->first = std::min(hull->first, lo);
      hull->second = std::max(hull->second, hi);
    }
  };
  for (const auto& a : atoms_) extend(a.location, a.location);
  if (density_) {
    const auto& d = *density_;
    switch (d.kind) {
      case DensityKind::semicircle: extend(d.first - d.second, d.first + d.second); break;
      case DensityKind::uniform: extend(d.first, d.second); break;
      case DensityKind::marchenko_pastur: {
        // (1 +- sqrt(rate))^2 bracketed by rationals: 0 <= lo, hi <= 2 (1 + rate).
        extend(Rational(0), 2 * d.second * (1 + d.first));
        break;
      }
      case DensityKind::cauchy: break;
    }
  }
  return hull;
}

std::optional<double> Measure::support_radius() const {
  if (!has_compact_support()) return std::nullopt;
  double radius = 0;
  for (const auto& a : atoms_) radius = std::max(radius, std::abs(a.location.get_d()));
  if (density_) {
    const auto [lo, hi] = density_support<double>(*density_);
    radius = std::max({radius, std::abs(lo), std::abs(hi)});
  }
  return radius;
}

Measure Measure::scaled(const Rational& factor) const {
  if (factor < 0) throw Error(ErrorCode::validation, "measures can only be scaled by nonnegative factors");
  if (factor == 0) return zero();
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.weight *= factor;
  std::optional<Density> density = density_;
  if (density) density->mass *= factor;
  return combine(std::move(atoms), std::move(density));
}

Measure add_discrete(const Measure& a, const Measure& b) {
  if (!a.is_discrete() || !b.is_discrete()) {
    throw Error(ErrorCode::unsupported, "measure addition is only defined for discrete measures");
  }
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return Measure::discrete(std::move(atoms));
}

// ------------------------------------------------------------------- moments

MomentSequence moments(const Measure& mu, std::size_t p) {
  MomentSequence out{std::vector<Rational>(p)};
  for (unsigned k = 1; k <= p; ++k) {
    Rational acc = 0;
    for (const auto& a : mu.atoms()) acc += a.weight * pow(a.location, k);
    if (mu.density()) acc += mu.density()->mass * density_moment(*mu.density(), k);
    acc.canonicalize();
    out.m[k - 1] = acc;
  }
  return out;
}

std::vector<double> quadrature_moments(const Measure& mu, std::size_t p) {
  std::vector<double> out(p, 0.0);
  for (unsigned k = 1; k <= p; ++k) {
    double acc = 0;
    for (const auto& a : mu.atoms()) acc += a.weight.get_d() * std::pow(a.location.get_d(), k);
    if (const auto& d = mu.density()) {
      if (d->kind == DensityKind::cauchy) {
        throw Error(ErrorCode::moment_does_not_exist, "the Cauchy law has no moments");
      }
      acc += d->mass.get_d() *
             integrate_density<double>(*d, [k](double x) { return std::pow(x, k); }, -1e300);
    }
    out[k - 1] = acc;
  }
  return out;
}

// ------------------------------------------------------------ Cauchy transform

template <class Real>
CauchyEvaluation<Real> evaluate_cauchy_transform(const Measure& mu, const complex_t<Real>& z) {
  using Complex = complex_t<Real>;
  using std::abs;
  using std::sqrt;
  const Real y = im(z);
  if (!(y > 0)) {
    const auto radius = mu.support_radius();
    if (!radius || !(abs(z) > Real(*radius))) {
      throw Error(ErrorCode::domain, "Cauchy transform needs Im z > 0, or |z| beyond a compact support");
    }
  }
  Complex value(0), derivative(0);
  for (const auto& a : mu.atoms()) {
    const Complex d = z - Complex(to_real<Real>(a.location));
    const Complex w(to_real<Real>(a.weight));
    value += w / d;
    derivative -= w / (d * d);
  }
  if (const auto& dens = mu.density()) {
    const Complex mass(to_real<Real>(dens->mass));
    switch (dens->kind) {
      case DensityKind::semicircle: {
        const Real r = to_real<Real>(dens->second);
        const Complex u = z - Complex(to_real<Real>(dens->first));
        const Complex s = sqrt(u * u - Complex(r * r));
        // Roots of (r^2/4) G^2 - u G + 1 = 0, written without cancellation:
        // 2 (u -+ s) / r^2 = 2 / (u +- s).
        const Complex g1 = Complex(2) / (u + s);
        const Complex g2 = Complex(2) / (u - s);
        // The two roots have opposite imaginary parts; Herglotz picks one.
        bool first;
        if (y > 0) {
          first = im(g1) <= im(g2);
        } else if (y < 0) {
          first = im(g1) >= im(g2);
        } else {
          first = abs(g1) <= abs(g2);
        }
        const Complex g = first ? g1 : g2;
        value += mass * g;
        derivative += mass * g / (Complex(r * r / 2) * g - u);
        break;
      }
      case DensityKind::cauchy: {
        const Complex d = z - Complex(to_real<Real>(dens->first), -to_real<Real>(dens->second));
        value += mass / d;
        derivative -= mass / (d * d);
        break;
      }
      case DensityKind::marchenko_pastur: {
        // alpha z G^2 - (z + alpha (1 - lambda)) G + 1 = 0; the branch
        // sqrt(z - a) sqrt(z - b) is analytic off [a, b] and ~ z at infinity.
        const auto [a, b] = density_support<Real>(*dens);
        const Real rate = to_real<Real>(dens->first);
        const Real jump = to_real<Real>(dens->second);
        const Complex n = z + Complex(jump * (1 - rate));
        const Complex s = sqrt(z - Complex(a)) * sqrt(z - Complex(b));
        const Complex g = Complex(2) / (n + s);
        value += mass * g;
        derivative += mass * (g - Complex(jump) * g * g) / (Complex(2 * jump) * z * g - n);
        break;
      }
      case DensityKind::uniform: {
        // Only a near-real z makes the integrand peaked.
        const Real split = abs(y) < Real(1) ? Real(re(z)) : Real(-std::numeric_limits<double>::max());
        value += mass * integrate_density<Real>(*dens, [&](const Real& x) { return Complex(1) / (z - Complex(x)); }, split);
        derivative -= mass * integrate_density<Real>(
                                 *dens,
                                 [&](const Real& x) {
                                   const Complex d = z - Complex(x);
                                   return Complex(1) / (d * d);
                                 },
                                 split);
        break;
      }
    }
  }
  return {value, derivative};
}

template CauchyEvaluation<double> evaluate_cauchy_transform<double>(const Measure&, const std::complex<double>&);
template CauchyEvaluation<Extended> evaluate_cauchy_transform<Extended>(const Measure&, const ExtendedComplex&);

std::complex<double> cauchy_transform(const Measure& mu, std::complex<double> z) {
  return evaluate_cauchy_transform<double>(mu, z).value;
}

std::complex<double> cauchy_transform_by_quadrature(const Measure& mu, std::complex<double> z) {
  if (!(z.imag() > 0)) throw Error(ErrorCode::domain, "quadrature Cauchy transform needs Im z > 0");
  std::complex<double> value = 0;
  for (const auto& a : mu.atoms()) value += a.weight.get_d() / (z - a.location.get_d());
  if (const auto& d = mu.density()) {
    if (d->kind == DensityKind::cauchy) {
      throw Error(ErrorCode::unsupported, "no quadrature path for the Cauchy density");
    }
    value += d->mass.get_d() *
             integrate_density<double>(*d, [&](double x) { return 1.0 / (z - x); }, z.real());
  }
  return value;
}

RationalComplex cauchy_transform_exact(const Measure& mu, const RationalComplex& z) {
  if (!mu.is_discrete()) throw Error(ErrorCode::unsupported, "exact Cauchy transform needs a discrete measure");
  RationalComplex out{0, 0};
  for (const auto& a : mu.atoms()) {
    const Rational dx = z.re - a.location;
    const Rational norm = dx * dx + z.im * z.im;
    if (norm == 0) throw Error(ErrorCode::domain, "Cauchy transform evaluated at an atom");
    out.re += a.weight * dx / norm;
    out.im -= a.weight * z.im / norm;
  }
  out.re.canonicalize();
  out.im.canonicalize();
  return out;
}

// -------------------------------------------------------------- truncation

bool Window::contains(const Rational& t) const {
  if (lo && (lo_closed ? t < *lo : t <= *lo)) return false;
  if (hi && (hi_closed ? t > *hi : t >= *hi)) return false;
  return true;
}

Measure truncate_measure(const Measure& sigma, const Window& window) {
  if (!sigma.is_discrete()) throw Error(ErrorCode::unsupported, "truncation is only supported for discrete measures");
  std::vector<Atom> kept;
  for (const auto& a : sigma.atoms()) {
    if (window.contains(a.location)) kept.push_back(a);
  }
  return Measure::discrete(std::move(kept));
}

}  // namespace freemoments
