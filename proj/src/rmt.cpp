#include "freemoments/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

#include "freemoments/error.hpp"

namespace freemoments {

std::string_view to_string(EnsembleKind kind) noexcept {
  switch (kind) {
    case EnsembleKind::gue: return "gue";
    case EnsembleKind::wishart: return "wishart";
    case EnsembleKind::deterministic: return "deterministic";
    case EnsembleKind::free_sum: return "free_sum";
  }
  return "unknown";
}

Ensemble Ensemble::gue() { return Ensemble{}; }

Ensemble Ensemble::wishart(const Rational& rate) {
  if (rate <= 0) throw Error(ErrorCode::validation, "Wishart rate must be positive");
  Ensemble e;
  e.kind = EnsembleKind::wishart;
  e.rate = rate;
  return e;
}

Ensemble Ensemble::deterministic(const Measure& mu) {
  if (!mu.is_discrete()) throw Error(ErrorCode::unsupported, "deterministic ensembles need a discrete measure");
  if (mu.total_mass() != 1) throw Error(ErrorCode::validation, "deterministic ensembles need a probability measure");
  Ensemble e;
  e.kind = EnsembleKind::deterministic;
  e.measure = mu;
  return e;
}

Ensemble Ensemble::free_sum(std::vector<Ensemble> parts) {
  if (parts.empty()) throw Error(ErrorCode::validation, "free sum needs at least one part");
  Ensemble e;
  e.kind = EnsembleKind::free_sum;
  e.parts = std::move(parts);
  return e;
}

Ensemble Ensemble::scaled(double s) const {
  Ensemble e = *this;
  e.scale *= s;
  e.shift *= s;
  return e;
}

Ensemble Ensemble::shifted(double c) const {
  Ensemble e = *this;
  e.shift += c;
  return e;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(seed ^ splitmix(trial));
}

namespace {

// Entries with E|x|^2 = 1.
Eigen::MatrixXcd complex_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd x(rows, cols);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i, j) = {re, im};
    }
  }
  return x;
}

std::size_t wishart_columns(const Rational& rate, std::size_t n) {
  const Rational exact = rate * Rational(static_cast<unsigned long>(n));
  const double cols = std::round(exact.get_d());
  return static_cast<std::size_t>(std::max(1.0, cols));
}

std::vector<std::size_t> multiplicities(const Measure& mu, std::size_t n, double* distortion) {
  // largest remainder rounding of weight * n so the counts sum to n
  const auto& atoms = mu.atoms();
  std::vector<std::size_t> counts(atoms.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t used = 0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const double exact = atoms[j].weight.get_d() * static_cast<double>(n);
    counts[j] = static_cast<std::size_t>(std::floor(exact));
    used += counts[j];
    remainders.emplace_back(exact - std::floor(exact), j);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; used < n && r < remainders.size(); ++r, ++used) ++counts[remainders[r].second];
  double d = 0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    d += std::abs(static_cast<double>(counts[j]) / static_cast<double>(n) - atoms[j].weight.get_d());
  }
  *distortion = d;
  return counts;
}

double work_estimate(const Ensemble& e, std::size_t n) {
  const double n3 = std::pow(static_cast<double>(n), 3);
  switch (e.kind) {
    case EnsembleKind::gue:
    case EnsembleKind::deterministic: return static_cast<double>(n) * static_cast<double>(n);
    case EnsembleKind::wishart: return n3 * std::max(1.0, e.rate.get_d());
    case EnsembleKind::free_sum: {
      double total = 0;
      for (const auto& part : e.parts) total += work_estimate(part, n) + 4 * n3;
      return total;
    }
  }
  return 0;
}

void validate(const Ensemble& e) {
  if (!std::isfinite(e.scale) || !std::isfinite(e.shift)) throw Error(ErrorCode::validation, "scale and shift must be finite");
  if (e.kind == EnsembleKind::free_sum) {
    if (e.parts.empty()) throw Error(ErrorCode::validation, "free sum needs at least one part");
    for (const auto& part : e.parts) validate(part);
  }
  if (e.kind == EnsembleKind::wishart && e.rate <= 0) throw Error(ErrorCode::validation, "Wishart rate must be positive");
  if (e.kind == EnsembleKind::deterministic) {
    if (!e.measure.is_discrete() || e.measure.total_mass() != 1) {
      throw Error(ErrorCode::validation, "deterministic ensembles need a discrete probability measure");
    }
  }
}

void validate(const MatrixEnsembleSpec& spec) {
  if (spec.dim < 2) throw Error(ErrorCode::validation, "dimension must be at least 2");
  if (spec.trials < 1) throw Error(ErrorCode::validation, "at least one trial is needed");
  validate(spec.ensemble);
}

void add_construction_warnings(const Ensemble& e, std::size_t n, std::vector<std::string>& warnings) {
  switch (e.kind) {
    case EnsembleKind::wishart: {
      const Rational exact = e.rate * Rational(static_cast<unsigned long>(n));
      if (exact.get_den() != 1) {
        warnings.push_back("wishart rate * N = " + std::to_string(exact.get_d()) + " rounded to " +
                           std::to_string(wishart_columns(e.rate, n)) + " columns");
      }
      break;
    }
    case EnsembleKind::deterministic: {
      double distortion = 0;
      multiplicities(e.measure, n, &distortion);
      if (distortion > 0) {
        warnings.push_back("atom multiplicities rounded; total mass distortion " + std::to_string(distortion));
      }
      break;
    }
    case EnsembleKind::free_sum:
      for (const auto& part : e.parts) add_construction_warnings(part, n, warnings);
      break;
    case EnsembleKind::gue: break;
  }
}

template <class F>
void for_each_trial(std::size_t trials, unsigned threads, F body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < trials; t += workers) body(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Eigen::MatrixXcd haar_unitary(std::size_t n, std::mt19937_64& rng, bool phase_fix) {
  const Eigen::MatrixXcd z = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  if (phase_fix) {
    // Q R = Q D D^{-1} R with D = diag(r_ii / |r_ii|) makes R's diagonal positive.
    const auto& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const std::complex<double> d = r(j, j);
      const double mag = std::abs(d);
      if (mag > 0) q.col(j) *= d / mag;
    }
  }
  return q;
}

Eigen::MatrixXcd sample_matrix(const Ensemble& e, std::size_t n, std::mt19937_64& rng, std::vector<std::string>* warnings) {
  Eigen::MatrixXcd a;
  const auto size = static_cast<Eigen::Index>(n);
  switch (e.kind) {
    case EnsembleKind::gue: {
      const Eigen::MatrixXcd g = complex_gaussian(n, n, rng);
      a = (g + g.adjoint()) / std::sqrt(2.0 * static_cast<double>(n));
      break;
    }
    case EnsembleKind::wishart: {
      const Eigen::MatrixXcd x = complex_gaussian(n, wishart_columns(e.rate, n), rng);
      a = Eigen::MatrixXcd::Zero(size, size);
      a.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(n));
      a = a.selfadjointView<Eigen::Lower>();
      break;
    }
    case EnsembleKind::deterministic: {
      double distortion = 0;
      const auto counts = multiplicities(e.measure, n, &distortion);
      a = Eigen::MatrixXcd::Zero(size, size);
      Eigen::Index i = 0;
      for (std::size_t j = 0; j < counts.size(); ++j) {
        for (std::size_t c = 0; c < counts[j]; ++c, ++i) a(i, i) = e.measure.atoms()[j].location.get_d();
      }
      break;
    }
    case EnsembleKind::free_sum: {
      a = sample_matrix(e.parts.front(), n, rng, nullptr);
      for (std::size_t j = 1; j < e.parts.size(); ++j) {
        const Eigen::MatrixXcd b = sample_matrix(e.parts[j], n, rng, nullptr);
        const Eigen::MatrixXcd u = haar_unitary(n, rng);
        if (e.parts[j].kind == EnsembleKind::deterministic) {
          // U diag(d) U* without forming the diagonal product
          const Eigen::VectorXcd d = b.diagonal();
          a.noalias() += (u * d.asDiagonal()) * u.adjoint();
        } else {
          a.noalias() += (u * b) * u.adjoint();
        }
      }
      break;
    }
  }
  if (warnings) add_construction_warnings(e, n, *warnings);
  if (e.scale != 1.0) a *= e.scale;
  if (e.shift != 0.0) a.diagonal().array() += e.shift;
  return a;
}

std::vector<double> trace_moments(const Eigen::MatrixXcd& a, std::size_t p) {
  const double n = static_cast<double>(a.rows());
  const std::size_t half = (p + 1) / 2;
  std::vector<Eigen::MatrixXcd> powers;
  powers.reserve(half);
  if (half > 0) powers.push_back(a);
  for (std::size_t k = 2; k <= half; ++k) {
    Eigen::MatrixXcd next(a.rows(), a.cols());
    next.noalias() = powers.back() * a;
    powers.push_back(std::move(next));
  }
  std::vector<double> out(p);
  for (std::size_t k = 1; k <= p; ++k) {
    if (k <= half) {
      out[k - 1] = powers[k - 1].trace().real() / n;
    } else {
      // tr(X Y) = sum_ij X_ij Y_ji
      const auto& x = powers[half - 1];
      const auto& y = powers[k - half - 1];
      out[k - 1] = x.cwiseProduct(y.transpose()).sum().real() / n;
    }
  }
  return out;
}

MomentEstimate sample_trace_moments(const MatrixEnsembleSpec& spec, std::size_t p) {
  validate(spec);
  if (p == 0) throw Error(ErrorCode::validation, "order must be positive");
  const double n3 = std::pow(static_cast<double>(spec.dim), 3);
  const double work = static_cast<double>(spec.trials) *
                      (work_estimate(spec.ensemble, spec.dim) + static_cast<double>((p + 1) / 2) * n3);
  if (work > spec.budget) {
    throw Error(ErrorCode::budget_exceeded, "estimated work " + std::to_string(work) + " exceeds budget " +
                                                std::to_string(spec.budget));
  }
  std::vector<std::vector<double>> per_trial(spec.trials);
  for_each_trial(spec.trials, spec.threads, [&](std::size_t t) {
    std::mt19937_64 rng(trial_seed(spec.seed, t));
    per_trial[t] = trace_moments(sample_matrix(spec.ensemble, spec.dim, rng), p);
  });

  MomentEstimate est;
  est.p = p;
  est.dim = spec.dim;
  est.trials = spec.trials;
  add_construction_warnings(spec.ensemble, spec.dim, est.warnings);
  est.mean.assign(p, 0.0);
  est.stderr_.assign(p, 0.0);
  const double trials = static_cast<double>(spec.trials);
  for (std::size_t k = 0; k < p; ++k) {
    double sum = 0;
    for (const auto& m : per_trial) sum += m[k];
    const double mean = sum / trials;
    double ss = 0;
    for (const auto& m : per_trial) ss += (m[k] - mean) * (m[k] - mean);
    est.mean[k] = mean;
    est.stderr_[k] = spec.trials > 1 ? std::sqrt(ss / (trials - 1) / trials) : 0.0;
  }
  return est;
}

PredictionReport compare_to_prediction(const MomentEstimate& est, const MomentSequence& target, double z, double c) {
  if (target.order() != est.p) throw Error(ErrorCode::order_mismatch, "estimate and target orders differ");
  if (!(z >= 0) || !(c >= 0)) throw Error(ErrorCode::validation, "z and c must be nonnegative");
  PredictionReport report;
  report.z = z;
  report.c = c;
  const double p = static_cast<double>(est.p);
  const double allowance = c * p * p / static_cast<double>(std::max<std::size_t>(est.dim, 1));
  for (std::size_t k = 1; k <= est.p; ++k) {
    const double t = target(k).get_d();
    const double allowed = z * est.stderr_[k - 1] + allowance;
    report.allowed.push_back(allowed);
    if (!(std::abs(est.mean[k - 1] - t) <= allowed)) {
      report.pass = false;
      report.violations.push_back({k, est.mean[k - 1], t, allowed});
    }
  }
  return report;
}

bool rejects_value(const MomentEstimate& est, std::size_t k, double value, double z, double c) {
  if (k == 0 || k > est.p) throw Error(ErrorCode::validation, "moment index out of range");
  const double p = static_cast<double>(est.p);
  const double allowed = z * est.stderr_[k - 1] + c * p * p / static_cast<double>(est.dim);
  return std::abs(est.mean[k - 1] - value) > allowed;
}

Ensemble levy_matched_ensemble(const LevyPair& lp) {
  if (!lp.sigma.is_discrete()) throw Error(ErrorCode::unsupported, "matched matrix models need a discrete Levy measure");
  std::vector<Ensemble> parts;
  double shift = lp.gamma.get_d();
  for (const auto& atom : lp.sigma.atoms()) {
    if (atom.location == 0) {
      parts.push_back(Ensemble::gue().scaled(std::sqrt(atom.weight.get_d())));
      continue;
    }
    const Rational& t = atom.location;
    const Rational rate = atom.weight * (1 + t * t) / (t * t);
    parts.push_back(Ensemble::wishart(rate).scaled(t.get_d()));
    shift -= Rational(atom.weight / t).get_d();
  }
  if (parts.empty()) {
    return Ensemble::deterministic(Measure::dirac(0)).shifted(shift);
  }
  // GUE and Wishart laws are unitarily invariant, so independent copies are
  // already asymptotically free; the Haar rotations are kept for uniformity.
  Ensemble sum = parts.size() == 1 ? parts.front() : Ensemble::free_sum(std::move(parts));
  return sum.shifted(shift);
}

SpectrumEdgeReport sample_spectrum_edges(const MatrixEnsembleSpec& spec, double eps) {
  validate(spec);
  std::vector<std::pair<double, double>> edges(spec.trials);
  for_each_trial(spec.trials, spec.threads, [&](std::size_t t) {
    std::mt19937_64 rng(trial_seed(spec.seed, t));
    const Eigen::MatrixXcd a = sample_matrix(spec.ensemble, spec.dim, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    edges[t] = {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
  });
  SpectrumEdgeReport r;
  r.eps = eps;
  r.min_eigenvalue = edges.front().first;
  r.max_eigenvalue = edges.front().second;
  for (const auto& [lo, hi] : edges) {
    r.min_eigenvalue = std::min(r.min_eigenvalue, lo);
    r.max_eigenvalue = std::max(r.max_eigenvalue, hi);
  }
  r.nonnegative = r.min_eigenvalue >= -eps;
  return r;
}

}  // namespace freemoments
