#include "freemoments/series.hpp"

#include <algorithm>
#include <string>

#include "freemoments/error.hpp"

namespace freemoments {

TruncatedSeries::TruncatedSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::validation, "a truncated series needs at least one coefficient");
  for (auto& c : coeffs_) c.canonicalize();
}

TruncatedSeries TruncatedSeries::zero(std::size_t order) {
  return TruncatedSeries(std::vector<Rational>(order + 1));
}

TruncatedSeries TruncatedSeries::constant(const Rational& c, std::size_t order) {
  std::vector<Rational> coeffs(order + 1);
  coeffs[0] = c;
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries TruncatedSeries::identity(std::size_t order) {
  std::vector<Rational> coeffs(order + 1);
  if (order >= 1) coeffs[1] = 1;
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
  std::vector<Rational> coeffs(order + 1);
  for (std::size_t i = 0; i <= std::min(order, this->order()); ++i) coeffs[i] = coeffs_[i];
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries TruncatedSeries::times_z() const {
  std::vector<Rational> coeffs(coeffs_.size() + 1);
  std::copy(coeffs_.begin(), coeffs_.end(), coeffs.begin() + 1);
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries TruncatedSeries::divided_by_z() const {
  if (coeffs_[0] != 0) throw Error(ErrorCode::pole, "division by z of a series with nonzero constant term");
  if (order() == 0) throw Error(ErrorCode::validation, "division by z of an order-0 series");
  return TruncatedSeries(std::vector<Rational>(coeffs_.begin() + 1, coeffs_.end()));
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Rational> coeffs(order + 1);
  for (std::size_t i = 0; i <= order; ++i) coeffs[i] = a[i] + b[i];
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Rational> coeffs(order + 1);
  for (std::size_t i = 0; i <= order; ++i) coeffs[i] = a[i] - b[i];
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Rational> coeffs(order + 1);
  for (std::size_t i = 0; i <= order; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j <= order; ++j) coeffs[i + j] += a[i] * b[j];
  }
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries operator*(const Rational& c, const TruncatedSeries& a) {
  std::vector<Rational> coeffs(a.coeffs());
  for (auto& x : coeffs) x *= c;
  return TruncatedSeries(std::move(coeffs));
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }
TruncatedSeries series_scale(const TruncatedSeries& a, const Rational& c) { return c * a; }

TruncatedSeries series_reciprocal(const TruncatedSeries& s) {
  if (s[0] == 0) throw Error(ErrorCode::pole, "reciprocal of a series with zero constant term");
  const std::size_t order = s.order();
  const Rational inv0 = 1 / s[0];
  std::vector<Rational> t(order + 1);
  t[0] = inv0;
  for (std::size_t n = 1; n <= order; ++n) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= n; ++j) acc += s[j] * t[n - j];
    t[n] = -inv0 * acc;
  }
  return TruncatedSeries(std::move(t));
}

TruncatedSeries series_compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
  if (inner[0] != 0) {
    throw Error(ErrorCode::composition_domain, "inner series of a composition must have zero constant term");
  }
  const std::size_t order = std::min(outer.order(), inner.order());
  const TruncatedSeries in = inner.truncated(order);
  TruncatedSeries acc = TruncatedSeries::constant(outer[order], order);
  for (std::size_t i = order; i-- > 0;) {
    acc = acc * in + TruncatedSeries::constant(outer[i], order);
  }
  return acc;
}

TruncatedSeries series_comp_inverse(const TruncatedSeries& f) {
  if (f.order() < 1 || f[0] != 0 || f[1] == 0) {
    throw Error(ErrorCode::non_invertible_series,
                "compositional inverse needs a_0 = 0 and a_1 != 0");
  }
  const std::size_t order = f.order();
  // phi = w / f(w); g_n = [w^{n-1}] phi^n / n.
  const TruncatedSeries phi = series_reciprocal(f.divided_by_z());
  std::vector<Rational> g(order + 1);
  TruncatedSeries power = TruncatedSeries::constant(1, phi.order());
  for (std::size_t n = 1; n <= order; ++n) {
    power = power * phi;
    g[n] = power[n - 1] / Rational(static_cast<long>(n));
  }
  return TruncatedSeries(std::move(g));
}

TruncatedSeries series_exp(const TruncatedSeries& s) {
  if (s[0] != 0) throw Error(ErrorCode::composition_domain, "series_exp needs a zero constant term");
  const std::size_t order = s.order();
  std::vector<Rational> e(order + 1);
  e[0] = 1;
  for (std::size_t n = 1; n <= order; ++n) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= n; ++j) acc += Rational(static_cast<long>(j)) * s[j] * e[n - j];
    e[n] = acc / Rational(static_cast<long>(n));
  }
  return TruncatedSeries(std::move(e));
}

TruncatedSeries series_log(const TruncatedSeries& s) {
  if (s[0] != 1) throw Error(ErrorCode::composition_domain, "series_log needs constant term 1");
  const std::size_t order = s.order();
  std::vector<Rational> l(order + 1);
  for (std::size_t n = 1; n <= order; ++n) {
    Rational acc = Rational(static_cast<long>(n)) * s[n];
    for (std::size_t j = 1; j < n; ++j) acc -= Rational(static_cast<long>(j)) * l[j] * s[n - j];
    l[n] = acc / Rational(static_cast<long>(n));
  }
  return TruncatedSeries(std::move(l));
}

TruncatedSeries g_series_from_moments(const MomentSequence& m) {
  std::vector<Rational> coeffs(m.order() + 2);
  coeffs[1] = 1;
  for (std::size_t i = 0; i < m.order(); ++i) coeffs[i + 2] = m.m[i];
  return TruncatedSeries(std::move(coeffs));
}

RTransformChain r_transform_chain(const MomentSequence& m) {
  if (m.order() == 0) throw Error(ErrorCode::validation, "the R-series needs at least one moment");
  TruncatedSeries g = g_series_from_moments(m);
  TruncatedSeries l = series_comp_inverse(g);
  TruncatedSeries zk = series_reciprocal(l.divided_by_z());
  TruncatedSeries r = (zk - TruncatedSeries::constant(1, zk.order())).divided_by_z();
  return {std::move(g), std::move(l), std::move(zk), std::move(r)};
}

TruncatedSeries r_series_from_moments(const MomentSequence& m) {
  return r_transform_chain(m).r;
}

MomentSequence moments_from_r_series(const TruncatedSeries& r) {
  const TruncatedSeries zk = TruncatedSeries::constant(1, r.order() + 1) + r.times_z();
  const TruncatedSeries l = series_reciprocal(zk).times_z();
  const TruncatedSeries g = series_comp_inverse(l);
  MomentSequence out;
  out.m.assign(g.coeffs().begin() + 2, g.coeffs().end());
  return out;
}

CumulantSequence cumulants_of_r_series(const TruncatedSeries& r) {
  return CumulantSequence{r.coeffs(), CumulantKind::free};
}

TruncatedSeries r_series_of_cumulants(const CumulantSequence& k) {
  if (k.kind != CumulantKind::free) throw Error(ErrorCode::kind_mismatch, "R-series coefficients are free cumulants");
  if (k.order() == 0) throw Error(ErrorCode::validation, "empty cumulant sequence");
  return TruncatedSeries(k.k);
}

SupportBound support_bound_from_cumulants(const CumulantSequence& k) {
  if (k.kind != CumulantKind::free) throw Error(ErrorCode::kind_mismatch, "support bound needs free cumulants");
  std::size_t best = 0;
  Rational best_abs = 0;
  for (std::size_t n = 1; n <= k.order(); ++n) {
    const Rational a = abs(k(n));
    if (a == 0) continue;
    // |k_n|^{1/n} > |k_best|^{1/best}  <=>  |k_n|^best > |k_best|^n
    if (best == 0 || pow(a, static_cast<unsigned>(best)) > pow(best_abs, static_cast<unsigned>(n))) {
      best = n;
      best_abs = a;
    }
  }
  if (best == 0) return {Rational(0), Rational(0), 0, true};
  const RootBound root = nth_root_upper(best_abs, static_cast<unsigned>(best));
  return {Rational(16 * root.value), root.value, best, root.exact};
}

}  // namespace freemoments
