#include "freemoments/cumulants.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "freemoments/error.hpp"
#include "freemoments/nc_lattice.hpp"
#include "freemoments/series.hpp"

namespace freemoments {

std::string_view to_string(CumulantKind kind) noexcept {
  return kind == CumulantKind::free ? "free" : "classical";
}

namespace detail {

namespace {

using ClassTable = std::vector<PartitionClass>;

template <class Partition, class MobiusFn>
ClassTable group_by_type(const std::vector<Partition>& partitions, MobiusFn mobius) {
  std::map<std::vector<int>, std::pair<Integer, Integer>> groups;
  for (const auto& p : partitions) {
    auto sizes = p.block_sizes();
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    auto& slot = groups[sizes];
    slot.first += 1;
    slot.second += mobius(p);
  }
  ClassTable out;
  out.reserve(groups.size());
  for (auto& [sizes, acc] : groups) out.push_back({sizes, acc.first, acc.second});
  return out;
}

// Tables are immutable once built; the cache only ever grows.
class ClassCache {
 public:
  template <class Builder>
  const ClassTable& get(std::size_t n, Builder build) {
    std::lock_guard lock(mutex_);
    auto it = tables_.find(n);
    if (it == tables_.end()) {
      it = tables_.emplace(n, std::make_unique<ClassTable>(build(n))).first;
    }
    return *it->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, std::unique_ptr<ClassTable>> tables_;
};

}  // namespace

const std::vector<PartitionClass>& nc_classes(std::size_t n) {
  static ClassCache cache;
  return cache.get(n, [](std::size_t size) {
    const int order = static_cast<int>(size);
    const auto all = enumerate_nc(order, std::max(order, enumeration_ceiling()));
    const NCPartition top = NCPartition::full(order);
    return group_by_type(all, [&](const NCPartition& p) { return mobius_nc(NCInterval(p, top)); });
  });
}

const std::vector<PartitionClass>& set_partition_classes(std::size_t n) {
  static ClassCache cache;
  return cache.get(n, [](std::size_t size) {
    const auto all = enumerate_set_partitions(static_cast<int>(size));
    // Moebius function of the partition lattice: mu(pi, 1) = (-1)^{b-1} (b-1)!.
    return group_by_type(all, [](const SetPartition& p) {
      const int b = p.block_count();
      const Integer f = factorial(static_cast<unsigned>(b - 1));
      return (b % 2 == 1) ? f : Integer(-f);
    });
  });
}

}  // namespace detail

namespace {

enum class Weight { count, mobius };

// sum over classes of weight * prod_{s in sizes} x_s
std::vector<Rational> partition_sums(const std::vector<Rational>& x, bool noncrossing, Weight weight) {
  std::vector<Rational> out(x.size());
  for (std::size_t n = 1; n <= x.size(); ++n) {
    const auto& classes = noncrossing ? detail::nc_classes(n) : detail::set_partition_classes(n);
    Rational total = 0;
    for (const auto& cls : classes) {
      const Integer& w = weight == Weight::count ? cls.count : cls.mobius;
      if (w == 0) continue;
      Rational term(w);
      for (int s : cls.sizes) {
        term *= x[static_cast<std::size_t>(s - 1)];
        if (term == 0) break;
      }
      total += term;
    }
    total.canonicalize();
    out[n - 1] = total;
  }
  return out;
}

void require_kind(const CumulantSequence& c, CumulantKind kind) {
  if (c.kind != kind) {
    throw Error(ErrorCode::kind_mismatch, "expected " + std::string(to_string(kind)) + " cumulants, got " +
                                              std::string(to_string(c.kind)));
  }
}

void require_same_order(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::order_mismatch, "orders differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

MomentSequence moments_from_free_cumulants(const CumulantSequence& k) {
  require_kind(k, CumulantKind::free);
  return {partition_sums(k.k, true, Weight::count)};
}

CumulantSequence free_cumulants_from_moments(const MomentSequence& m) {
  return {partition_sums(m.m, true, Weight::mobius), CumulantKind::free};
}

CumulantSequence classical_cumulants_from_moments(const MomentSequence& m) {
  if (m.order() > kSetPartitionMaxOrder) return classical_cumulants_from_moments_egf(m);
  return {partition_sums(m.m, false, Weight::mobius), CumulantKind::classical};
}

MomentSequence moments_from_classical_cumulants(const CumulantSequence& c) {
  require_kind(c, CumulantKind::classical);
  if (c.order() > kSetPartitionMaxOrder) return moments_from_classical_cumulants_egf(c);
  return {partition_sums(c.k, false, Weight::count)};
}

CumulantSequence classical_cumulants_from_moments_egf(const MomentSequence& m) {
  const std::size_t p = m.order();
  std::vector<Rational> egf(p + 1);
  egf[0] = 1;
  for (std::size_t i = 1; i <= p; ++i) egf[i] = m(i) / Rational(factorial(static_cast<unsigned>(i)));
  const TruncatedSeries log_series = series_log(TruncatedSeries(std::move(egf)));
  CumulantSequence out{std::vector<Rational>(p), CumulantKind::classical};
  for (std::size_t i = 1; i <= p; ++i) out.k[i - 1] = log_series[i] * Rational(factorial(static_cast<unsigned>(i)));
  return out;
}

MomentSequence moments_from_classical_cumulants_egf(const CumulantSequence& c) {
  require_kind(c, CumulantKind::classical);
  const std::size_t p = c.order();
  std::vector<Rational> egf(p + 1);
  for (std::size_t i = 1; i <= p; ++i) egf[i] = c(i) / Rational(factorial(static_cast<unsigned>(i)));
  const TruncatedSeries exp_series = series_exp(TruncatedSeries(std::move(egf)));
  MomentSequence out{std::vector<Rational>(p)};
  for (std::size_t i = 1; i <= p; ++i) out.m[i - 1] = exp_series[i] * Rational(factorial(static_cast<unsigned>(i)));
  return out;
}

CumulantSequence add(const CumulantSequence& a, const CumulantSequence& b) {
  require_kind(b, a.kind);
  require_same_order(a.order(), b.order());
  CumulantSequence out{a.k, a.kind};
  for (std::size_t i = 0; i < out.k.size(); ++i) out.k[i] += b.k[i];
  return out;
}

CumulantSequence scale(const CumulantSequence& a, const Rational& factor) {
  CumulantSequence out{a.k, a.kind};
  for (auto& x : out.k) x *= factor;
  return out;
}

MomentSequence free_convolve(const MomentSequence& a, const MomentSequence& b) {
  require_same_order(a.order(), b.order());
  return moments_from_free_cumulants(add(free_cumulants_from_moments(a), free_cumulants_from_moments(b)));
}

MomentSequence classical_convolve(const MomentSequence& a, const MomentSequence& b) {
  require_same_order(a.order(), b.order());
  return moments_from_classical_cumulants(
      add(classical_cumulants_from_moments(a), classical_cumulants_from_moments(b)));
}

MomentSequence shift_moments(const MomentSequence& m, const Rational& shift) {
  MomentSequence out{std::vector<Rational>(m.order())};
  for (std::size_t n = 1; n <= m.order(); ++n) {
    Rational acc = 0;
    for (std::size_t j = 0; j <= n; ++j) {
      acc += Rational(binomial(static_cast<unsigned>(n), static_cast<unsigned>(j))) * m(j) *
             pow(shift, static_cast<unsigned>(n - j));
    }
    out.m[n - 1] = acc;
  }
  return out;
}

}  // namespace freemoments
