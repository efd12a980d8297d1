#include "freemoments/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "freemoments/cumulants.hpp"
#include "freemoments/error.hpp"
#include "freemoments/levy.hpp"
#include "freemoments/measures.hpp"
#include "freemoments/nc_lattice.hpp"
#include "freemoments/rmt.hpp"
#include "freemoments/rtransform.hpp"
#include "freemoments/series.hpp"

namespace freemoments {

namespace {

class Checks {
 public:
  void require(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::size_t count() const { return count_; }
  const std::vector<std::string>& failures() const { return failures_; }
  void note(std::string s) { notes_.push_back(std::move(s)); }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

Rational random_rational(std::mt19937_64& rng, long max_num = 20, long max_den = 9) {
  std::uniform_int_distribution<long> num(-max_num, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

std::vector<MomentSequence> random_moment_sequences(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> order(1, 10);
  std::vector<MomentSequence> out(200);
  for (auto& m : out) {
    const std::size_t p = order(rng);
    for (std::size_t i = 0; i < p; ++i) m.m.push_back(random_rational(rng));
  }
  return out;
}

Measure random_discrete(std::mt19937_64& rng, std::size_t atoms) {
  std::vector<Atom> a;
  std::uniform_int_distribution<long> weight(1, 9);
  for (std::size_t i = 0; i < atoms; ++i) a.push_back({random_rational(rng, 6, 4), Rational(weight(rng), 4)});
  return Measure::discrete(std::move(a));
}

void criterion_round_trip(Checks& c, const SuiteConfig& cfg) {
  for (const auto& m : random_moment_sequences(cfg.seed)) {
    const auto k = free_cumulants_from_moments(m);
    c.require(moments_from_free_cumulants(k) == m, "m -> k -> m at order " + std::to_string(m.order()));
    c.require(free_cumulants_from_moments(moments_from_free_cumulants(k)) == k,
              "k -> m -> k at order " + std::to_string(m.order()));
  }
  c.note(std::to_string(c.count()) + " exact round trips");
}

void criterion_speicher(Checks& c, const SuiteConfig& cfg) {
  for (const auto& m : random_moment_sequences(cfg.seed)) {
    c.require(r_series_from_moments(m).coeffs() == free_cumulants_from_moments(m).k,
              "R-series differs from free cumulants at order " + std::to_string(m.order()));
  }
  c.note(std::to_string(c.count()) + " sequences agree exactly");
}

void criterion_examples(Checks& c, const SuiteConfig&) {
  for (const Rational& a : {Rational(-5, 3), Rational(0), Rational(7, 2)}) {
    const auto r = r_series_from_moments(moments(Measure::dirac(a), 8));
    c.require(r == TruncatedSeries::constant(a, 7), "Dirac at " + format_rational(a) + " has R != a");
  }
  for (const auto& [m, rad] : {std::pair<Rational, Rational>{0, 2}, {Rational(1, 2), 3}, {-1, Rational(2, 5)}}) {
    const auto r = r_series_from_moments(moments(Measure::semicircle(m, rad), 9));
    bool ok = r[0] == m && r[1] == rad * rad / 4;
    for (std::size_t i = 2; i <= r.order(); ++i) ok = ok && r[i] == 0;
    c.require(ok, "semicircle(" + format_rational(m) + ", " + format_rational(rad) + ") R-series");
  }
  const auto samples = invert_g_on_ray(Measure::cauchy(0, 1), NontangentialRay{});
  double worst = 0;
  for (const auto& r : samples.R) worst = std::max(worst, static_cast<double>(abs(r - ExtendedComplex(0, -1))));
  c.require(!samples.R.empty() && worst < 1e-8, "Cauchy ray R deviates from -i by " + fmt(worst));
  c.note("Cauchy ray max |R + i| = " + fmt(worst) + " over " + std::to_string(samples.R.size()) + " points");
}

void criterion_taylor(Checks& c, const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const Measure random5 = random_discrete(rng, 5);
  struct Case {
    std::string name;
    Measure mu;
    double tol;
  };
  const std::vector<Case> cases = {
      {"semicircle(0,2)", Measure::semicircle(0, 2), 1e-5},
      {"MP(1)", Measure::marchenko_pastur(1), 1e-4},
      {"two-atom uniform", Measure::discrete({{-1, Rational(1, 2)}, {1, Rational(1, 2)}}), 1e-5},
      {"atoms + uniform density",
       Measure::combine({{-1, Rational(1, 4)}, {2, Rational(1, 4)}}, Density{DensityKind::uniform, 0, 1, Rational(1, 2)}),
       1e-5},
      {"random 5-atom", random5.scaled(1 / random5.total_mass()), 1e-5},
  };
  for (const auto& cs : cases) {
    const Measure& mu = cs.mu;
    std::vector<Rational> k = free_cumulants_from_moments(moments(mu, 4)).k;
    if (cfg.corrupt_semicircle && cs.name == "semicircle(0,2)") {
      k = free_cumulants_from_moments(MomentSequence{{0, 1, 0, 3}}).k;
    }
    const auto report = verify_taylor_expansion_against(mu, k, NontangentialRay{}, cs.tol);
    c.require(report.pass, cs.name + ": max deviation " + fmt(report.max_deviation) + " >= " + fmt(cs.tol));
    c.note(cs.name + " max deviation " + fmt(report.max_deviation));
  }
}

void criterion_nonreal(Checks& c, const SuiteConfig&) {
  const auto samples = invert_g_on_ray(Measure::cauchy(0, 1), NontangentialRay{});
  const auto est = estimate_taylor_on_ray(samples, 2);
  const double im = std::abs(est.coefficients[0].imag());
  c.require(im > 0.999, "|Im b_0| = " + fmt(im));
  c.require(!est.real_coefficients, "real-coefficient flag did not fire for the Cauchy law");
  c.note("|Im b_0| = " + fmt(im) + ", real-coefficient flag fired");
}

void criterion_support(Checks& c, const SuiteConfig&) {
  const std::vector<std::pair<std::string, Measure>> cases = {{"semicircle(0,2)", Measure::semicircle(0, 2)},
                                                              {"MP(1)", Measure::marchenko_pastur(1)}};
  for (const auto& [name, mu] : cases) {
    const auto b = support_bound_from_cumulants(free_cumulants_from_moments(moments(mu, 10)));
    c.require(b.bound == 16, name + " bound " + format_rational(b.bound) + " != 16");
    const auto hull = mu.support_hull();
    c.require(hull && -b.bound <= hull->first && hull->second <= b.bound, name + " support not inside the bound");
  }
  c.note("bound 16 for both; true supports [-2,2] and [0,4] (conservative by a factor 8 and 4)");
}

void criterion_free_poisson(Checks& c, const SuiteConfig&) {
  for (const Rational& rate : {Rational(1), Rational(3, 2), Rational(1, 3)}) {
    const auto lp = free_poisson_pair(rate);
    c.require(lp.gamma == rate / 2 && lp.sigma == Measure::dirac(1, rate / 2), "free Poisson pair shape");
    c.require(free_cumulants_from_levy(lp, 8).k == std::vector<Rational>(8, rate),
              "free Poisson(" + format_rational(rate) + ") cumulants are not all the rate");
  }
  const auto one = free_poisson_pair(1);
  c.require(moments_of_free_id(one, 4) == MomentSequence{{1, 2, 5, 14}}, "free moments (1,2,5,14)");
  c.require(moments_of_classical_id(one, 4) == MomentSequence{{1, 2, 5, 15}}, "classical moments (1,2,5,15)");
  const LevyPair gauss{0, Measure::dirac(0)};
  c.require(free_cumulants_from_levy(gauss, 4).k == std::vector<Rational>{0, 1, 0, 0}, "semicircle cumulants");
  c.require(moments_of_free_id(gauss, 6) == MomentSequence{{0, 1, 0, 2, 0, 5}}, "semicircle moments");
  c.require(moments_of_classical_id(gauss, 6) == MomentSequence{{0, 1, 0, 3, 0, 15}}, "Gaussian moments");
  c.note(std::to_string(c.count()) + " exact identities");
}

void criterion_semigroup(Checks& c, const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 8);
  std::uniform_int_distribution<std::size_t> atoms(1, 4);
  const std::size_t p = 6;
  for (int i = 0; i < 50; ++i) {
    const LevyPair a{random_rational(rng), random_discrete(rng, atoms(rng))};
    const LevyPair b{random_rational(rng), random_discrete(rng, atoms(rng))};
    c.require(free_cumulants_from_levy(levy_semigroup_add(a, b), p) ==
                  add(free_cumulants_from_levy(a, p), free_cumulants_from_levy(b, p)),
              "additivity, pair " + std::to_string(i));
    for (unsigned n : {2u, 3u, 7u}) {
      const LevyPair part = levy_scale(a, Rational(1, n));
      c.require(part.gamma == a.gamma / n && part.sigma == a.sigma.scaled(Rational(1, n)), "scaled pair shape");
      LevyPair sum = part;
      for (unsigned j = 1; j < n; ++j) sum = levy_semigroup_add(sum, part);
      c.require(sum == a, "n-fold sum of (gamma/n, sigma/n), n = " + std::to_string(n));
      c.require(free_cumulants_from_levy(part, p) == scale(free_cumulants_from_levy(a, p), Rational(1, n)),
                "cumulants scale by 1/" + std::to_string(n));
    }
  }
  c.note(std::to_string(c.count()) + " exact identities over 50 pairs");
}

void criterion_monte_carlo(Checks& c, const SuiteConfig& cfg) {
  auto spec = [&](Ensemble e, std::size_t n) {
    MatrixEnsembleSpec s;
    s.ensemble = std::move(e);
    s.dim = n;
    s.trials = 40;
    s.seed = cfg.seed;
    s.threads = cfg.threads;
    return s;
  };
  const auto gue = sample_trace_moments(spec(Ensemble::gue(), 500), 6);
  c.require(compare_to_prediction(gue, MomentSequence{{0, 1, 0, 2, 0, 5}}, 3).pass, "GUE vs (0,1,0,2,0,5)");
  const auto wishart = sample_trace_moments(spec(Ensemble::wishart(1), 500), 4);
  c.require(compare_to_prediction(wishart, MomentSequence{{1, 2, 5, 14}}, 3).pass, "Wishart(1) vs (1,2,5,14)");
  const Measure coin = Measure::discrete({{-1, Rational(1, 2)}, {1, Rational(1, 2)}});
  const auto target = free_convolve(moments(coin, 4), moments(coin, 4));
  c.require(target == MomentSequence{{0, 2, 0, 6}}, "free_convolve(coin, coin) = (0,2,0,6)");
  const auto sum = sample_trace_moments(
      spec(Ensemble::free_sum({Ensemble::deterministic(coin), Ensemble::deterministic(coin)}), 600), 4);
  c.require(compare_to_prediction(sum, target, 3).pass, "free sum vs (0,2,0,6)");
  c.require(rejects_value(sum, 4, 4.0, 3), "classical value m_4 = 4 not rejected");
  c.note("free-sum m_4 = " + fmt(sum.mean[3]) + " +- " + fmt(sum.stderr_[3]) + "; m_4 = 4 rejected");
}

void criterion_lattice(Checks& c, const SuiteConfig&) {
  for (int n = 1; n <= 10; ++n) {
    const auto nc = enumerate_nc(n);
    const Integer four_n = Integer(1) << (2 * n);
    c.require(Integer(static_cast<unsigned long>(nc.size())) <= four_n, "#NC(" + std::to_string(n) + ") > 4^n");
    c.require(Integer(static_cast<unsigned long>(nc.size())) == catalan(static_cast<unsigned>(n)),
              "#NC(" + std::to_string(n) + ") != Catalan");
    const auto top = NCPartition::full(n);
    Integer worst = 0;
    for (const auto& p : nc) {
      const Integer mob = abs(mobius_nc(NCInterval(p, top)));
      if (mob > worst) worst = mob;
    }
    c.require(worst <= four_n, "|Mob| > 4^n at n = " + std::to_string(n));
  }
  for (int n = 1; n <= 7; ++n) {
    const auto table = mobius_table_poset(n);
    for (std::size_t x = 0; x < table.elements.size(); ++x) {
      for (std::size_t y = 0; y < table.elements.size(); ++y) {
        if (!table.values[x][y]) continue;
        if (mobius_nc(NCInterval(table.elements[x], table.elements[y])) != *table.values[x][y]) {
          c.require(false, "closed form != poset recursion at n = " + std::to_string(n));
        }
      }
    }
  }
  c.note("counts and Moebius bounds for n <= 10; closed form = poset recursion for n <= 7");
}

struct Definition {
  int id;
  std::string name;
  std::string anchor;
  std::vector<std::string> tags;
  double time_limit;
  std::function<void(Checks&, const SuiteConfig&)> run;
};

const std::vector<Definition>& definitions() {
  static const std::vector<Definition> defs = {
      {1, "moment_cumulant_round_trip", "moment-cumulant formulas over NC(n)", {"cumulants", "series", "exact"}, 30,
       criterion_round_trip},
      {2, "r_series_equals_free_cumulants", "R-series coefficients coincide with free cumulants", {"series", "exact"},
       0, criterion_speicher},
      {3, "example_table", "Dirac, semicircle and Cauchy R-transforms", {"series", "numeric"}, 0, criterion_examples},
      {4, "taylor_expansion_on_ray", "Taylor coefficients of R on a nontangential ray are the free cumulants",
       {"numeric"}, 120, criterion_taylor},
      {5, "nonreal_coefficients", "real coefficients require finite moments (Cauchy law)", {"numeric"}, 0,
       criterion_nonreal},
      {6, "support_bound", "cumulant growth bounds the support", {"series", "exact"}, 0, criterion_support},
      {7, "free_poisson_and_gaussian", "Levy pair cumulants and the free Poisson law", {"levy", "exact"}, 0,
       criterion_free_poisson},
      {8, "semigroup_and_scaling", "Levy pairs form a semigroup compatible with free convolution", {"levy", "exact"},
       0, criterion_semigroup},
      {9, "monte_carlo_oracle", "random-matrix moments: GUE, Wishart, free sum of coins", {"rmt"}, 180,
       criterion_monte_carlo},
      {10, "combinatorial_bounds", "#NC(n) <= 4^n and |Moebius| <= 4^n", {"lattice", "exact"}, 0, criterion_lattice},
  };
  return defs;
}

bool selected(const Definition& d, const SuiteConfig& cfg) {
  if (cfg.only.empty()) return true;
  if (cfg.only.count(std::to_string(d.id)) || cfg.only.count(d.name)) return true;
  return std::any_of(d.tags.begin(), d.tags.end(), [&](const std::string& t) { return cfg.only.count(t) > 0; });
}

}  // namespace

std::vector<std::string> suite_tags() { return {"cumulants", "series", "exact", "numeric", "levy", "rmt", "lattice"}; }

SuiteReport run_suite(const SuiteConfig& config) {
  for (const auto& key : config.only) {
    const auto tags = suite_tags();
    const bool known = std::find(tags.begin(), tags.end(), key) != tags.end() ||
                       std::any_of(definitions().begin(), definitions().end(), [&](const Definition& d) {
                         return std::to_string(d.id) == key || d.name == key;
                       });
    if (!known) throw Error(ErrorCode::validation, "unknown criterion or tag '" + key + "'");
  }
  SuiteReport report;
  for (const auto& d : definitions()) {
    if (!selected(d, config)) continue;
    CriterionResult r;
    r.id = d.id;
    r.name = d.name;
    r.anchor = d.anchor;
    r.tags = d.tags;
    r.time_limit = d.time_limit;
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      d.run(checks, config);
    } catch (const Error& e) {
      checks.require(false, std::string(to_string(e.code())) + ": " + e.what());
    } catch (const std::exception& e) {
      checks.require(false, e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (d.time_limit > 0 && r.seconds > d.time_limit) {
      checks.require(false, "runtime " + fmt(r.seconds) + " s exceeds " + fmt(d.time_limit) + " s");
    }
    r.pass = checks.ok();
    r.checks = r.pass ? checks.notes() : checks.failures();
    report.pass = report.pass && r.pass;
    report.criteria.push_back(std::move(r));
  }
  return report;
}

}  // namespace freemoments
