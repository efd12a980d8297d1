#pragma once

// Monte Carlo moments of random matrices: (1/N) tr(A^k) averaged over trials.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "freemoments/levy.hpp"
#include "freemoments/measures.hpp"
#include "freemoments/sequences.hpp"

namespace freemoments {

enum class EnsembleKind { gue, wishart, deterministic, free_sum };

std::string_view to_string(EnsembleKind kind) noexcept;

/// A Hermitian random matrix model; the sampled matrix is scale * A + shift * I.
struct Ensemble {
  EnsembleKind kind = EnsembleKind::gue;
  /// wishart: X X* / N with X of size N x round(rate N).
  Rational rate = 1;
  /// deterministic: diagonal with atom multiplicities round(weight N).
  Measure measure = Measure::zero();
  /// free_sum: A_1 + U_2 A_2 U_2* + ... with independent Haar U_j.
  std::vector<Ensemble> parts;
  double scale = 1.0;
  double shift = 0.0;

  static Ensemble gue();
  static Ensemble wishart(const Rational& rate);
  static Ensemble deterministic(const Measure& mu);
  static Ensemble free_sum(std::vector<Ensemble> parts);
  Ensemble scaled(double s) const;
  Ensemble shifted(double c) const;
};

struct MatrixEnsembleSpec {
  Ensemble ensemble;
  std::size_t dim = 100;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  /// Worker threads over trials; results do not depend on it.
  unsigned threads = 1;
  /// Rough ceiling on floating-point work (multiply-adds).
  double budget = 5e12;
};

struct MomentEstimate {
  std::size_t p = 0;
  std::size_t dim = 0;
  std::size_t trials = 0;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<std::string> warnings;
};

/// Generator identity recorded in reports.
inline constexpr std::string_view prng_name = "splitmix64(seed ^ splitmix64(trial)) -> mt19937_64";

/// Seed of trial `trial`, derived with splitmix64 from (seed, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Haar unitary from the QR factorization of a complex Gaussian matrix. With
/// `phase_fix` off the plain Householder Q is returned, which is not Haar.
Eigen::MatrixXcd haar_unitary(std::size_t n, std::mt19937_64& rng, bool phase_fix = true);

/// One draw of the ensemble.
Eigen::MatrixXcd sample_matrix(const Ensemble& e, std::size_t n, std::mt19937_64& rng,
                               std::vector<std::string>* warnings = nullptr);

/// (1/N) Re tr(A^k), k = 1..p, using powers up to ceil(p/2) and tr(XY).
std::vector<double> trace_moments(const Eigen::MatrixXcd& a, std::size_t p);

MomentEstimate sample_trace_moments(const MatrixEnsembleSpec& spec, std::size_t p);

struct PredictionViolation {
  std::size_t k;
  double mean;
  double target;
  double allowed;
};

struct PredictionReport {
  bool pass = true;
  double z = 3;
  double c = 5;
  std::vector<double> allowed;
  std::vector<PredictionViolation> violations;
};

/// |mean_k - target_k| <= z stderr_k + c p^2 / N for every k.
PredictionReport compare_to_prediction(const MomentEstimate& est, const MomentSequence& target, double z,
                                       double c = 5);

/// True when value is outside the band z stderr_k + c p^2 / N around mean_k.
bool rejects_value(const MomentEstimate& est, std::size_t k, double value, double z, double c = 5);

/// The matrix model of nu(gamma, sigma) for discrete sigma: an atom w at t != 0
/// contributes t * Wishart(w (1 + t^2) / t^2) - w / t, an atom at 0 sqrt(w) GUE.
Ensemble levy_matched_ensemble(const LevyPair& lp);

struct SpectrumEdgeReport {
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  double eps = 0;
  bool nonnegative = false;
};

/// Smallest and largest eigenvalue over all trials; `nonnegative` when the
/// smallest is >= -eps.
SpectrumEdgeReport sample_spectrum_edges(const MatrixEnsembleSpec& spec, double eps);

}  // namespace freemoments
