#include <random>

#include "doctest.h"
#include "freemoments/cumulants.hpp"
#include "freemoments/error.hpp"
#include "test_support.hpp"

using namespace freemoments;
using namespace freemoments::testing;

namespace {

CumulantSequence free_k(std::initializer_list<long> v) { return {rationals(v), CumulantKind::free}; }
CumulantSequence classical_c(std::initializer_list<long> v) { return {rationals(v), CumulantKind::classical}; }

}  // namespace

TEST_CASE("moments_from_free_cumulants examples") {
  const Rational a(3, 2);
  CumulantSequence dirac{{a, 0, 0, 0, 0}, CumulantKind::free};
  const auto m = moments_from_free_cumulants(dirac);
  for (unsigned i = 1; i <= 5; ++i) CHECK(m(i) == pow(a, i));

  CHECK(moments_from_free_cumulants(free_k({0, 1, 0, 0, 0, 0})) == moments({0, 1, 0, 2, 0, 5}));
  CHECK(moments_from_free_cumulants(free_k({1, 1, 1, 1})) == moments({1, 2, 5, 14}));
}

TEST_CASE("free_cumulants_from_moments examples") {
  const Rational m1(2, 3), m2(5, 7);
  CHECK(free_cumulants_from_moments(MomentSequence{{m1}}).k == std::vector<Rational>{m1});
  const auto k = free_cumulants_from_moments(MomentSequence{{m1, m2}});
  CHECK(k(2) == m2 - m1 * m1);
  CHECK(free_cumulants_from_moments(moments({0, 1, 0, 2})) == free_k({0, 1, 0, 0}));
}

TEST_CASE("classical transforms examples") {
  CHECK(classical_cumulants_from_moments(moments({7})).k == rationals({7}));
  CHECK(classical_cumulants_from_moments(moments({0, 1, 0, 3})) == classical_c({0, 1, 0, 0}));
  CHECK(classical_cumulants_from_moments(moments({1, 2, 5, 15})) == classical_c({1, 1, 1, 1}));

  const Rational a(-2, 5);
  const auto m = moments_from_classical_cumulants({{a, 0, 0, 0}, CumulantKind::classical});
  for (unsigned i = 1; i <= 4; ++i) CHECK(m(i) == pow(a, i));
  CHECK(moments_from_classical_cumulants(classical_c({0, 1, 0, 0})) == moments({0, 1, 0, 3}));
  CHECK(moments_from_classical_cumulants(classical_c({1, 1, 1, 1})) == moments({1, 2, 5, 15}));
}

TEST_CASE("kind mismatches are rejected") {
  CHECK_THROWS_AS(moments_from_free_cumulants(classical_c({1})), Error);
  CHECK_THROWS_AS(moments_from_classical_cumulants(free_k({1})), Error);
  try {
    moments_from_free_cumulants(classical_c({1}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kind_mismatch);
  }
}

TEST_CASE("transforms agree with partition-by-partition oracles") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = random_rationals(rng, 8);
    CHECK(moments_from_free_cumulants({x, CumulantKind::free}).m == partition_sum_brute_force(x, true));
    CHECK(moments_from_classical_cumulants({x, CumulantKind::classical}).m == partition_sum_brute_force(x, false));
    // Forward substitution, no Moebius function involved.
    CHECK(free_cumulants_from_moments({x}).k == invert_partition_sum(x, true));
    CHECK(classical_cumulants_from_moments({x}).k == invert_partition_sum(x, false));
  }
}

TEST_CASE("round trips are exact") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t p = 1 + trial % 10;
    const MomentSequence m{random_rationals(rng, p)};
    CHECK(moments_from_free_cumulants(free_cumulants_from_moments(m)) == m);
    CHECK(moments_from_classical_cumulants(classical_cumulants_from_moments(m)) == m);
  }
}

TEST_CASE("set-partition and generating-function routes agree") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const MomentSequence m{random_rationals(rng, 1 + trial)};
    CHECK(classical_cumulants_from_moments(m) == classical_cumulants_from_moments_egf(m));
    const CumulantSequence c{random_rationals(rng, 1 + trial), CumulantKind::classical};
    CHECK(moments_from_classical_cumulants(c) == moments_from_classical_cumulants_egf(c));
  }
  // Above the enumeration cap the generating function takes over.
  const MomentSequence gaussian = moments_from_classical_cumulants_egf(
      {rationals({0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}), CumulantKind::classical});
  CHECK(gaussian(14) == 135135);  // 13!!
  CHECK(classical_cumulants_from_moments(gaussian).k[1] == 1);
}

TEST_CASE("free_convolve") {
  std::mt19937_64 rng(99);
  const MomentSequence zero{std::vector<Rational>(6)};
  for (int trial = 0; trial < 8; ++trial) {
    const MomentSequence a{random_rationals(rng, 6)}, b{random_rationals(rng, 6)}, c{random_rationals(rng, 6)};
    CHECK(free_convolve(zero, b) == b);
    CHECK(free_convolve(a, b) == free_convolve(b, a));
    CHECK(free_convolve(free_convolve(a, b), c) == free_convolve(a, free_convolve(b, c)));
  }

  const auto semicircle2 = moments({0, 1, 0, 2, 0, 5});
  const auto sum = free_convolve(semicircle2, semicircle2);
  CHECK(sum.m[1] == 2);
  CHECK(sum.m[3] == 8);

  const Rational a(1, 3);
  const MomentSequence dirac{{a, a * a, a * a * a, pow(a, 4), pow(a, 5), pow(a, 6)}};
  const MomentSequence mu{random_rationals(rng, 6)};
  CHECK(free_convolve(dirac, mu) == shift_moments(mu, a));

  CHECK_THROWS_AS(free_convolve(moments({1, 2}), moments({1})), Error);
}

TEST_CASE("shifting changes only the first free cumulant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const MomentSequence m{random_rationals(rng, 7)};
    const Rational a = random_rational(rng);
    const auto k = free_cumulants_from_moments(m);
    const auto ks = free_cumulants_from_moments(shift_moments(m, a));
    CHECK(ks(1) == k(1) + a);
    for (std::size_t i = 2; i <= 7; ++i) CHECK(ks(i) == k(i));
  }
}

TEST_CASE("free and classical cumulants agree at orders 1 and 2 only") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const MomentSequence m{random_rationals(rng, 4)};
    const auto k = free_cumulants_from_moments(m);
    const auto c = classical_cumulants_from_moments(m);
    CHECK(k(1) == c(1));
    CHECK(k(2) == c(2));
    CHECK(k(2) == m(2) - m(1) * m(1));
  }
  const auto semicircle = moments({0, 1, 0, 2});
  CHECK(free_cumulants_from_moments(semicircle)(4) == 0);
  CHECK(classical_cumulants_from_moments(semicircle)(4) == -1);
  CHECK(free_cumulants_from_moments(semicircle)(3) == classical_cumulants_from_moments(semicircle)(3));
}

TEST_CASE("classical convolution adds classical cumulants") {
  // Two standard Gaussians give variance 2: m_4 = 3 * 2^2.
  const auto g = moments({0, 1, 0, 3});
  CHECK(classical_convolve(g, g) == moments({0, 2, 0, 12}));
  // Free self-convolution of a fair +-1 coin is the arcsine law, the
  // classical one is the binomial: (0, 2, 0, 6) versus (0, 2, 0, 8).
  const auto coin = moments({0, 1, 0, 1});
  CHECK(free_convolve(coin, coin) == moments({0, 2, 0, 6}));
  CHECK(classical_convolve(coin, coin) == moments({0, 2, 0, 8}));
}
