#include <random>

#include "doctest.h"
#include "freemoments/cumulants.hpp"
#include "freemoments/error.hpp"
#include "freemoments/levy.hpp"
#include "test_support.hpp"

using namespace freemoments;
using freemoments::testing::partition_sum_brute_force;
using freemoments::testing::rationals;

namespace {

LevyPair random_pair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 4), loc(-12, 12), weight(1, 7), num(-5, 5), den(1, 4);
  std::vector<Atom> atoms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) atoms.push_back({Rational(loc(rng), 4), Rational(weight(rng), den(rng))});
  return {Rational(num(rng), den(rng)), Measure::discrete(atoms)};
}

}  // namespace

TEST_CASE("free cumulants of Levy pairs") {
  CHECK(free_cumulants_from_levy({}, 4).k == rationals({0, 0, 0, 0}));
  CHECK(free_cumulants_from_levy({0, Measure::dirac(0, 3)}, 4).k == rationals({0, 3, 0, 0}));
  for (long lambda : {1L, 2L, 5L}) {
    CHECK(free_cumulants_from_levy(free_poisson_pair(lambda), 6).k ==
          std::vector<Rational>(6, Rational(lambda)));
  }
  const auto half = free_poisson_pair(Rational(1, 3));
  CHECK(free_cumulants_from_levy(half, 3).k == std::vector<Rational>(3, Rational(1, 3)));
  // gamma only enters k_1
  const LevyPair drift{Rational(5, 2), Measure::dirac(2, Rational(1, 2))};
  CHECK(free_cumulants_from_levy(drift, 4).k ==
        std::vector<Rational>{Rational(7, 2), Rational(5, 2), Rational(5), Rational(10)});
}

TEST_CASE("moments of free infinitely divisible laws") {
  CHECK(moments_of_free_id(free_poisson_pair(1), 4).m == rationals({1, 2, 5, 14}));
  CHECK(moments_of_free_id({0, Measure::dirac(0)}, 4).m == rationals({0, 1, 0, 2}));
  const LevyPair pair{1, Measure::dirac(1)};
  CHECK(free_cumulants_from_levy(pair, 4).k == rationals({2, 2, 2, 2}));
  CHECK(moments_of_free_id(pair, 4).m == rationals({2, 6, 22, 90}));
  CHECK(partition_sum_brute_force(rationals({2, 2, 2, 2}), true) == rationals({2, 6, 22, 90}));
}

TEST_CASE("classical correspondent") {
  const auto poisson = free_poisson_pair(1);
  CHECK(classical_cumulants_from_levy(poisson, 4).kind == CumulantKind::classical);
  CHECK(moments_of_classical_id(poisson, 4).m == rationals({1, 2, 5, 15}));
  CHECK(partition_sum_brute_force(rationals({1, 1, 1, 1}), false) == rationals({1, 2, 5, 15}));
  const LevyPair gauss{0, Measure::dirac(0)};
  CHECK(moments_of_classical_id(gauss, 4).m == rationals({0, 1, 0, 3}));
  CHECK(moments_of_free_id(gauss, 4).m == rationals({0, 1, 0, 2}));
  const LevyPair dirac{Rational(3, 2), Measure::zero()};
  CHECK(moments_of_classical_id(dirac, 3).m == moments(Measure::dirac(Rational(3, 2)), 3).m);
  CHECK(moments_of_free_id(dirac, 3).m == moments(Measure::dirac(Rational(3, 2)), 3).m);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) {
    const auto lp = random_pair(rng);
    CHECK(free_cumulants_from_levy(lp, 6).k == classical_cumulants_from_levy(lp, 6).k);
  }
}

TEST_CASE("semigroup and scaling") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_pair(rng), b = random_pair(rng);
    const auto sum = levy_semigroup_add(a, b);
    CHECK(free_cumulants_from_levy(sum, 6) == add(free_cumulants_from_levy(a, 6), free_cumulants_from_levy(b, 6)));
    CHECK(moments_of_free_id(sum, 6) == free_convolve(moments_of_free_id(a, 6), moments_of_free_id(b, 6)));
    CHECK(moments_of_classical_id(sum, 6) ==
          classical_convolve(moments_of_classical_id(a, 6), moments_of_classical_id(b, 6)));
    for (int n : {2, 3, 7}) {
      CHECK(free_cumulants_from_levy(levy_scale(a, Rational(1, n)), 6) ==
            scale(free_cumulants_from_levy(a, 6), Rational(1, n)));
    }
  }
  const auto a = random_pair(rng);
  CHECK(levy_semigroup_add(a, LevyPair{}) == a);
  CHECK(levy_semigroup_add(free_poisson_pair(2), free_poisson_pair(3)) == free_poisson_pair(5));
  const auto merged = levy_semigroup_add({1, Measure::dirac(1, 2)}, {2, Measure::discrete({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}})});
  CHECK(merged.gamma == 3);
  CHECK(merged.sigma == Measure::discrete({{Rational(0), Rational(1)}, {Rational(1), Rational(3)}}));
  CHECK_THROWS_AS(levy_semigroup_add(a, {0, Measure::semicircle(0, 1)}), Error);
  CHECK_THROWS_AS(levy_scale(a, 0), Error);
}

TEST_CASE("monotone truncation") {
  const auto sigma = Measure::discrete({{Rational(1, 2), Rational(1)},
                                        {Rational(3, 2), Rational(1, 3)},
                                        {Rational(4), Rational(1, 5)},
                                        {Rational(9), Rational(1, 7)}});
  const auto full = moments(sigma, 6);
  MomentSequence previous{std::vector<Rational>(6, Rational(0))};
  for (int n = 1; n <= 10; ++n) {
    const auto truncated = truncate_measure(sigma, Window{Rational(0), Rational(n), false, false});
    const auto m = moments(truncated, 6);
    for (std::size_t q = 1; q <= 6; ++q) {
      CHECK(m(q) >= previous(q));
      CHECK(m(q) <= full(q));
    }
    // the truncated laws stay below the bound
    const auto bound = *diagnose_moment_transfer({0, sigma}, 6).truncation_bound;
    CHECK(moments_of_free_id({0, truncated}, 6)(6) <= bound);
    previous = m;
  }
  CHECK(previous == full);
}

TEST_CASE("moment transfer diagnostics") {
  {
    const auto r = diagnose_moment_transfer({0, Measure::dirac(1)}, 4);
    REQUIRE(r.truncation_bound);
    // NC(4) with k_1 = 1 and k_{j>=2} = 2
    CHECK(*r.truncation_bound == 31);
    CHECK(*r.truncation_bound == partition_sum_brute_force(rationals({1, 2, 2, 2}), true).back());
    CHECK(r.sigma_has_moment);
    CHECK(r.converse_applies);
    CHECK(r.support_positive);
  }
  {
    const auto two_signed = Measure::discrete({{Rational(-1), Rational(1)}, {Rational(2), Rational(1)}});
    const auto r = diagnose_moment_transfer({0, two_signed}, 3);
    CHECK(!r.converse_applies);
    CHECK(r.support_minorized);
    CHECK(r.support_majorized);
    CHECK(diagnose_moment_transfer({0, two_signed}, 2).converse_applies);
    CHECK(diagnose_moment_transfer({0, Measure::dirac(-3)}, 5).converse_applies);
  }
  {
    const auto r = diagnose_moment_transfer({0, Measure::cauchy(0, 1)}, 3);
    CHECK(!r.sigma_has_moment);
    CHECK(!r.truncation_bound);
    CHECK(!r.support_minorized);
  }
  CHECK(diagnose_moment_transfer({0, Measure::marchenko_pastur(2)}, 3).support_positive);
  CHECK(!diagnose_moment_transfer({0, Measure::marchenko_pastur(1)}, 3).support_positive);
  // bound dominates |m_p| of the gamma = 0 law
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    auto lp = random_pair(rng);
    lp.gamma = 0;
    for (std::size_t p = 1; p <= 6; ++p) {
      CHECK(abs(moments_of_free_id(lp, p)(p)) <= *diagnose_moment_transfer(lp, p).truncation_bound);
    }
  }
  CHECK_THROWS_AS(free_cumulants_from_levy({0, Measure::cauchy(0, 1)}, 2), Error);
}
