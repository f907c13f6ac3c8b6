// Copyright 2026 The wclt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wclt/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "wclt/quadrature.hpp"

namespace wclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-9;

void check_finite(const std::vector<double>& v) {
  if (v.empty()) throw ValidationError("sample must be nonempty");
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError("sample contains a non-finite value");
  }
}

// Tail index r <= 2 makes sqrt(tail) ~ t^{-r/2} non-integrable.
std::optional<double> heavy_tail_index(const DistributionModel& m) {
  if (m.tail_class() != TailClass::kPowerLaw) return std::nullopt;
  auto r = m.tail_exponent();
  if (r && *r <= 2.0) return r;
  return std::nullopt;
}

}  // namespace

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
  check_finite(values_);
  std::sort(values_.begin(), values_.end());
}

SortedSample::SortedSample(std::vector<double> values, Presorted) : values_(std::move(values)) {}

SortedSample SortedSample::from_sorted(std::vector<double> values) {
  check_finite(values);
  if (!std::is_sorted(values.begin(), values.end())) {
    throw ValidationError("SortedSample::from_sorted: values are not ascending");
  }
  return SortedSample(std::move(values), Presorted{});
}

double w1_two_samples(const SortedSample& x, const SortedSample& y) {
  const auto xs = x.values();
  const auto ys = y.values();
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  const std::int64_t m = static_cast<std::int64_t>(ys.size());
  std::int64_t i = 0, j = 0;
  double prev = std::min(xs[0], ys[0]);
  double acc = 0.0;
  // F_x = i/n and F_y = j/m on [prev, next); |i/n - j/m| = |i m - j n| / (n m).
  while (i < n || j < m) {
    const double next = std::min(i < n ? xs[static_cast<std::size_t>(i)] : kInf,
                                 j < m ? ys[static_cast<std::size_t>(j)] : kInf);
    const std::int64_t gap = i * m - j * n;
    acc += static_cast<double>(gap < 0 ? -gap : gap) * (next - prev);
    while (i < n && xs[static_cast<std::size_t>(i)] == next) ++i;
    while (j < m && ys[static_cast<std::size_t>(j)] == next) ++j;
    prev = next;
  }
  return acc / (static_cast<double>(n) * static_cast<double>(m));
}

double w1_order_statistic_coupling(const SortedSample& x, const SortedSample& y) {
  if (x.size() != y.size()) throw ValidationError("order-statistic coupling needs equal sample sizes");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
  return acc / static_cast<double>(x.size());
}

ExtendedReal w1_sample_vs_model(const SortedSample& s, const DistributionModel& m, double tail_tol) {
  if (!(tail_tol > 0.0)) throw ValidationError("tail_tol must be positive");
  const auto v = s.values();
  const std::size_t n = v.size();
  auto right = m.upper_tail_integral(v[n - 1]);
  if (right.is_infinite()) return right;

  double acc = m.lower_tail_integral(v[0]);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = v[i - 1];
    const double b = v[i];
    if (!(b > a)) continue;
    const double level = static_cast<double>(i) / dn;
    const double c = std::clamp(m.quantile(level), a, b);
    // F <= level on [a, c), F >= level on [c, b)
    const double below = level * (c - a) - m.cdf_integral(a, c);
    const double above = m.cdf_integral(c, b) - level * (b - c);
    acc += std::max(0.0, below) + std::max(0.0, above);
  }
  return ExtendedReal::finite(acc + right.value());
}

ExtendedReal lambda21(const DistributionModel& m) {
  if (auto r = heavy_tail_index(m)) {
    return ExtendedReal::infinity(*r / 2.0, "sqrt of the tail decays like t^{-r/2} with r <= 2");
  }
  const auto cuts = m.tail_breakpoints();
  const double upper = std::max(std::abs(m.support_lower()), std::abs(m.support_upper()));
  auto integrand = [&m](double t) { return std::sqrt(m.tail(t)); };
  auto res = quadrature::piecewise(integrand, 0.0, upper, cuts, kRelTol);
  return ExtendedReal::finite(std::max(0.0, res.value));
}

ExtendedReal quantile_tail_integral(const DistributionModel& m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("quantile_tail_integral requires alpha in [0, 1]");
  if (alpha == 0.0) return ExtendedReal::finite(0.0);
  if (auto r = heavy_tail_index(m)) {
    return ExtendedReal::infinity(0.5 + 1.0 / *r, "Q(u)/sqrt(u) ~ u^{-1/2-1/r} with r <= 2");
  }
  const double vmax = std::sqrt(alpha);
  // kinks of Q(v^2) sit at v = sqrt(P(|Y| > t_k))
  std::vector<double> cuts;
  for (double t : m.tail_breakpoints()) {
    const double vk = std::sqrt(m.tail(t));
    if (vk > 0.0 && vk < vmax) cuts.push_back(vk);
  }
  std::sort(cuts.begin(), cuts.end());
  // v * v underflows near 0, where Q may be unbounded but integrable
  auto integrand = [&m](double v) { return m.abs_quantile(std::max(v * v, std::numeric_limits<double>::min())); };
  auto res = quadrature::piecewise(integrand, 0.0, vmax, cuts, kRelTol);
  return ExtendedReal::finite(std::max(0.0, 2.0 * res.value));
}

ExtendedReal sqrt_tail_min_integral(const DistributionModel& m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("sqrt_tail_min_integral requires alpha in [0, 1]");
  if (alpha == 0.0) return ExtendedReal::finite(0.0);
  if (auto r = heavy_tail_index(m)) {
    return ExtendedReal::infinity(*r / 2.0, "sqrt of the tail decays like t^{-r/2} with r <= 2");
  }
  // Crossing t* = inf{t >= 0 : tail(t) <= alpha}, located by bisection on
  // the tail itself (not through the quantile).
  double crossing = 0.0;
  if (m.tail(0.0) > alpha) {
    double lo = 0.0;
    double hi = std::max(std::abs(m.support_lower()), std::abs(m.support_upper()));
    if (!std::isfinite(hi)) {
      hi = 1.0;
      while (m.tail(hi) > alpha) hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (m.tail(mid) <= alpha ? hi : lo) = mid;
    }
    crossing = hi;
  }
  const double upper = std::max(std::abs(m.support_lower()), std::abs(m.support_upper()));
  double flat = std::sqrt(alpha) * crossing;
  if (crossing >= upper) return ExtendedReal::finite(std::sqrt(alpha) * upper);
  auto integrand = [&m, alpha](double t) { return std::sqrt(std::min(alpha, m.tail(t))); };
  auto res = quadrature::piecewise(integrand, crossing, upper, m.tail_breakpoints(), kRelTol);
  return ExtendedReal::finite(flat + std::max(0.0, res.value));
}

}  // namespace wclt
