#include "freemoments/levy.hpp"

#include "freemoments/cumulants.hpp"
#include "freemoments/error.hpp"

namespace freemoments {

namespace {

std::vector<Rational> levy_cumulants(const LevyPair& lp, std::size_t p) {
  const MomentSequence sm = moments(lp.sigma, p);
  const Rational mass = lp.sigma.total_mass();
  auto sigma_moment = [&](std::size_t j) { return j == 0 ? mass : sm(j); };
  std::vector<Rational> k(p);
  for (std::size_t i = 1; i <= p; ++i) {
    k[i - 1] = (i == 1 ? lp.gamma : sigma_moment(i - 2)) + sigma_moment(i);
    k[i - 1].canonicalize();
  }
  return k;
}

}  // namespace

CumulantSequence free_cumulants_from_levy(const LevyPair& lp, std::size_t p) {
  return {levy_cumulants(lp, p), CumulantKind::free};
}

MomentSequence moments_of_free_id(const LevyPair& lp, std::size_t p) {
  return moments_from_free_cumulants(free_cumulants_from_levy(lp, p));
}

CumulantSequence classical_cumulants_from_levy(const LevyPair& lp, std::size_t p) {
  return {levy_cumulants(lp, p), CumulantKind::classical};
}

MomentSequence moments_of_classical_id(const LevyPair& lp, std::size_t p) {
  return moments_from_classical_cumulants(classical_cumulants_from_levy(lp, p));
}

LevyPair levy_semigroup_add(const LevyPair& a, const LevyPair& b) {
  return {a.gamma + b.gamma, add_discrete(a.sigma, b.sigma)};
}

LevyPair levy_scale(const LevyPair& lp, const Rational& c) {
  if (c <= 0) throw Error(ErrorCode::validation, "scaling factor must be positive");
  return {c * lp.gamma, lp.sigma.scaled(c)};
}

LevyPair free_poisson_pair(const Rational& rate) {
  if (rate <= 0) throw Error(ErrorCode::validation, "rate must be positive");
  return {rate / 2, Measure::dirac(1, rate / 2)};
}

MomentTransferReport diagnose_moment_transfer(const LevyPair& lp, std::size_t p) {
  MomentTransferReport r;
  r.order = p;
  r.even_order = p % 2 == 0;
  const Measure& sigma = lp.sigma;
  r.sigma_has_moment = sigma.has_compact_support() || p == 0;
  const auto hull = sigma.support_hull();
  if (hull) {
    r.support_minorized = r.support_majorized = true;
    r.support_positive = hull->first > 0;
    r.support_negative = hull->second < 0;
    if (sigma.density()) {
      // The MP hull is a rational bracket; decide positivity from the exact edges.
      const auto& d = *sigma.density();
      if (d.kind == DensityKind::marchenko_pastur) {
        bool atoms_positive = true;
        for (const auto& a : sigma.atoms()) atoms_positive = atoms_positive && a.location > 0;
        r.support_positive = atoms_positive && d.first > 1;
      }
    }
  } else if (sigma.total_mass() == 0) {
    r.support_minorized = r.support_majorized = true;
  }
  r.converse_applies = r.even_order || r.support_positive || r.support_negative;

  if (sigma.is_discrete()) {
    std::vector<Rational> abs_moments(p + 1);
    for (std::size_t j = 0; j <= p; ++j) {
      Rational acc = 0;
      for (const auto& a : sigma.atoms()) acc += a.weight * pow(abs(a.location), static_cast<unsigned>(j));
      abs_moments[j] = acc;
    }
    std::vector<Rational> b(p);
    for (std::size_t i = 1; i <= p; ++i) {
      b[i - 1] = (i >= 2 ? abs_moments[i - 2] : Rational(0)) + abs_moments[i];
    }
    if (p == 0) {
      r.truncation_bound = Rational(1);
    } else {
      r.truncation_bound = moments_from_free_cumulants(CumulantSequence{b, CumulantKind::free}).m.back();
    }
  }
  return r;
}

}  // namespace freemoments
