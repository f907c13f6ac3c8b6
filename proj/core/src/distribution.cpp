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

#include "wclt/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* msg) {
  if (!ok) throw ValidationError(msg);
}

// ---------------------------------------------------------------- Pareto

ParetoTail lebesgue_pushforward(const PowerPushforward& p) {
  return ParetoTail{1.0, 1.0 / p.exponent};
}

// Integral of (c/s)^r over [a, b], c <= a <= b.
double pareto_tail_mass(const ParetoTail& p, double a, double b) {
  const double c = p.scale, r = p.exponent;
  if (std::abs(r - 1.0) < 1e-12) return c * std::log(b / a);
  return (a * std::pow(c / a, r) - b * std::pow(c / b, r)) / (r - 1.0);
}

double pareto_cdf(const ParetoTail& p, double t) {
  return t < p.scale ? 0.0 : -std::expm1(p.exponent * std::log(p.scale / t));
}

double pareto_cdf_integral(const ParetoTail& p, double a, double b) {
  const double lo = std::max(a, p.scale);
  if (b <= lo) return 0.0;
  return (b - lo) - pareto_tail_mass(p, lo, b);
}

ExtendedReal pareto_upper(const ParetoTail& p, double t) {
  if (p.exponent <= 1.0) {
    return ExtendedReal::infinity(p.exponent, "Pareto tail with exponent <= 1 has infinite mean");
  }
  if (t < p.scale) {
    return ExtendedReal::finite((p.scale - t) + p.scale / (p.exponent - 1.0));
  }
  return ExtendedReal::finite(t * std::pow(p.scale / t, p.exponent) / (p.exponent - 1.0));
}

// ------------------------------------------------------------- Tabulated

std::size_t segment_of(const std::vector<double>& grid, double t) {
  // index k with grid[k] <= t < grid[k+1]; caller ensures grid[0] <= t < grid.back()
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  return static_cast<std::size_t>(std::distance(grid.begin(), it)) - 1;
}

double tab_cdf(const Tabulated& tb, double t) {
  const auto& g = tb.grid;
  const auto& c = tb.cdf;
  if (t < g.front()) return 0.0;
  if (t >= g.back()) return 1.0;
  const std::size_t k = segment_of(g, t);
  if (tb.interpolation == Interpolation::kStep) return c[k];
  const double w = (t - g[k]) / (g[k + 1] - g[k]);
  return c[k] + (c[k + 1] - c[k]) * w;
}

double tab_cdf_left(const Tabulated& tb, double t) {
  const auto& g = tb.grid;
  const auto& c = tb.cdf;
  if (t <= g.front()) return 0.0;
  if (t > g.back()) return 1.0;
  if (t == g.back() && tb.interpolation == Interpolation::kLinear) return c.back();
  if (tb.interpolation == Interpolation::kStep) {
    auto it = std::lower_bound(g.begin(), g.end(), t);
    const std::size_t k = static_cast<std::size_t>(std::distance(g.begin(), it));
    return c[k - 1];
  }
  return tab_cdf(tb, t);
}

double tab_quantile(const Tabulated& tb, double u) {
  const auto& g = tb.grid;
  const auto& c = tb.cdf;
  auto it = std::lower_bound(c.begin(), c.end(), u);
  if (it == c.end()) return g.back();
  const std::size_t k = static_cast<std::size_t>(std::distance(c.begin(), it));
  if (k == 0 || tb.interpolation == Interpolation::kStep) return g[k];
  const double frac = (u - c[k - 1]) / (c[k] - c[k - 1]);
  return g[k - 1] + frac * (g[k] - g[k - 1]);
}

std::vector<double> tab_prefix(const Tabulated& tb) {
  const auto& g = tb.grid;
  const auto& c = tb.cdf;
  std::vector<double> a(g.size(), 0.0);
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    const double h = g[k + 1] - g[k];
    a[k + 1] = a[k] + (tb.interpolation == Interpolation::kStep ? c[k] * h : 0.5 * (c[k] + c[k + 1]) * h);
  }
  return a;
}

double tab_antiderivative(const Tabulated& tb, const std::vector<double>& a, double t) {
  const auto& g = tb.grid;
  const auto& c = tb.cdf;
  if (t <= g.front()) return 0.0;
  if (t >= g.back()) return a.back() + (t - g.back());
  const std::size_t k = segment_of(g, t);
  const double d = t - g[k];
  if (tb.interpolation == Interpolation::kStep) return a[k] + c[k] * d;
  const double h = g[k + 1] - g[k];
  return a[k] + c[k] * d + (c[k + 1] - c[k]) * d * d / (2.0 * h);
}

// ------------------------------------------- Tabulated base pushforward
//
// Y = X^{-a}, X ~ G on [0, 1]. For t >= 1, 1 - F_Y(t) = G(t^{-1/a}), and
// integrals of 1 - F_Y over t become integrals of G(x) a x^{-a-1} over x.

double base_cdf(const TabulatedBase& b, double x) {
  const auto& g = b.grid;
  const auto& c = b.cdf;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x < g.front()) return c.front() * std::pow(x / g.front(), b.origin_exponent);
  const std::size_t k = segment_of(g, x);
  const double w = (x - g[k]) / (g[k + 1] - g[k]);
  return c[k] + (c[k + 1] - c[k]) * w;
}

// sup{x : G(x) <= v}
double base_inverse_upper(const TabulatedBase& b, double v) {
  const auto& g = b.grid;
  const auto& c = b.cdf;
  if (v >= 1.0) return 1.0;
  if (v < 0.0) return 0.0;
  auto it = std::upper_bound(c.begin(), c.end(), v);
  if (it == c.end()) return 1.0;
  const std::size_t k = static_cast<std::size_t>(std::distance(c.begin(), it));
  if (k == 0) {
    return g.front() * std::pow(v / c.front(), 1.0 / b.origin_exponent);
  }
  const double frac = (v - c[k - 1]) / (c[k] - c[k - 1]);
  return g[k - 1] + frac * (g[k] - g[k - 1]);
}

// Integral of G(x) a x^{-a-1} over [xl, xr] inside node segment k.
double base_segment_integral(const TabulatedBase& b, double a, std::size_t k, double xl, double xr) {
  const auto& g = b.grid;
  const auto& c = b.cdf;
  const double slope = (c[k + 1] - c[k]) / (g[k + 1] - g[k]);
  const double intercept = c[k] - slope * g[k];
  double r = intercept * (std::pow(xl, -a) - std::pow(xr, -a));
  if (std::abs(1.0 - a) < 1e-12) {
    r += slope * std::log(xr / xl);
  } else {
    r += slope * a * (std::pow(xr, 1.0 - a) - std::pow(xl, 1.0 - a)) / (1.0 - a);
  }
  return r;
}

// Integral of G(x) a x^{-a-1} over [xl, xr] inside (0, x_1].
double base_origin_integral(const TabulatedBase& b, double a, double xl, double xr) {
  const double k = b.origin_exponent;
  const double coef = a * b.cdf.front() * std::pow(b.grid.front(), -k);
  if (coef == 0.0) return 0.0;
  if (std::abs(k - a) < 1e-12) return coef * std::log(xr / xl);
  return coef * (std::pow(xr, k - a) - std::pow(xl, k - a)) / (k - a);
}

std::vector<double> base_prefix(const TabulatedBase& b, double a) {
  std::vector<double> p(b.grid.size(), 0.0);
  for (std::size_t k = 0; k + 1 < b.grid.size(); ++k) {
    p[k + 1] = p[k] + base_segment_integral(b, a, k, b.grid[k], b.grid[k + 1]);
  }
  return p;
}

// Signed integral of G(x) a x^{-a-1} from x_1 to x.
double base_running(const TabulatedBase& b, double a, const std::vector<double>& p, double x) {
  const auto& g = b.grid;
  if (x < g.front()) return -base_origin_integral(b, a, x, g.front());
  if (x >= g.back()) return p.back();
  const std::size_t k = segment_of(g, x);
  return p[k] + base_segment_integral(b, a, k, g[k], x);
}

// Integral of G(t^{-1/a}) over t in [t1, t2], 1 <= t1 <= t2.
double base_tail_mass(const TabulatedBase& b, double a, const std::vector<double>& p, double t1, double t2) {
  const double x1 = std::pow(t1, -1.0 / a);
  const double x2 = std::pow(t2, -1.0 / a);
  return base_running(b, a, p, x1) - base_running(b, a, p, x2);
}

ExtendedReal base_upper(const TabulatedBase& b, double a, const std::vector<double>& p, double t) {
  if (t < 1.0) {
    auto rest = base_upper(b, a, p, 1.0);
    if (rest.is_infinite()) return rest;
    return ExtendedReal::finite((1.0 - t) + rest.value());
  }
  const double kappa = b.origin_exponent;
  const double g1 = b.cdf.front();
  const double x = std::pow(t, -1.0 / a);
  if (g1 > 0.0 && kappa <= a) {
    return ExtendedReal::infinity(kappa / a, "pushforward tail index <= 1 has infinite mean");
  }
  double origin = 0.0;
  if (g1 > 0.0) {
    origin = a * g1 * std::pow(b.grid.front(), -a) / (kappa - a);
  }
  if (x < b.grid.front()) {
    const double coef = a * g1 * std::pow(b.grid.front(), -kappa);
    return ExtendedReal::finite(g1 > 0.0 ? coef * std::pow(x, kappa - a) / (kappa - a) : 0.0);
  }
  return ExtendedReal::finite(std::max(0.0, origin + base_running(b, a, p, x)));
}

double generic_abs_quantile(const DistributionModel& m, double u) {
  if (u >= 1.0) return 0.0;
  if (m.tail(0.0) <= u) return 0.0;
  double lo = 0.0;
  double hi = std::max(std::abs(m.support_lower()), std::abs(m.support_upper()));
  if (!std::isfinite(hi)) {
    hi = 1.0;
    while (m.tail(hi) > u) hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (m.tail(mid) <= u) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

void validate(const DistributionModel::Kind& kind) {
  std::visit(overloaded{
                 [](const Uniform& u) {
                   require(std::isfinite(u.lo) && std::isfinite(u.hi) && u.lo < u.hi,
                           "Uniform requires finite lo < hi");
                 },
                 [](const Exponential& e) {
                   require(std::isfinite(e.rate) && e.rate > 0.0, "Exponential requires rate > 0");
                 },
                 [](const ParetoTail& p) {
                   require(std::isfinite(p.scale) && p.scale > 0.0 && std::isfinite(p.exponent) && p.exponent > 0.0,
                           "ParetoTail requires scale > 0 and exponent > 0");
                 },
                 [](const PowerPushforward& p) {
                   require(std::isfinite(p.exponent) && p.exponent > 0.0, "PowerPushforward requires exponent > 0");
                   if (!p.base) return;
                   const auto& b = *p.base;
                   require(!b.grid.empty() && b.grid.size() == b.cdf.size(),
                           "TabulatedBase requires matching nonempty grid and cdf");
                   require(b.grid.front() > 0.0 && b.grid.back() == 1.0,
                           "TabulatedBase grid must lie in (0, 1] and end at 1");
                   require(b.cdf.back() == 1.0, "TabulatedBase cdf must reach 1 at x = 1");
                   require(b.origin_exponent > 0.0, "TabulatedBase origin_exponent must be > 0");
                   for (std::size_t k = 0; k < b.grid.size(); ++k) {
                     require(b.cdf[k] >= 0.0 && b.cdf[k] <= 1.0, "TabulatedBase cdf outside [0, 1]");
                     if (k > 0) {
                       require(b.grid[k] > b.grid[k - 1], "TabulatedBase grid must be strictly increasing");
                       require(b.cdf[k] >= b.cdf[k - 1], "TabulatedBase cdf must be nondecreasing");
                     }
                   }
                 },
                 [](const Tabulated& t) {
                   require(!t.grid.empty() && t.grid.size() == t.cdf.size(),
                           "Tabulated requires matching nonempty grid and cdf");
                   for (std::size_t k = 0; k < t.grid.size(); ++k) {
                     require(std::isfinite(t.grid[k]), "Tabulated grid must be finite");
                     require(t.cdf[k] >= 0.0 && t.cdf[k] <= 1.0, "Tabulated cdf outside [0, 1]");
                     if (k > 0) {
                       require(t.grid[k] > t.grid[k - 1], "Tabulated grid must be strictly increasing");
                       require(t.cdf[k] >= t.cdf[k - 1], "Tabulated cdf must be nondecreasing");
                     }
                   }
                 },
             },
             kind);
}

}  // namespace

DistributionModel::DistributionModel(Kind kind) : kind_(std::move(kind)) {
  validate(kind_);
  if (auto* t = std::get_if<Tabulated>(&kind_)) {
    prefix_ = tab_prefix(*t);
  } else if (auto* p = std::get_if<PowerPushforward>(&kind_); p && p->base) {
    prefix_ = base_prefix(*p->base, p->exponent);
  }
}

DistributionModel& DistributionModel::set_density_bound(double k) {
  require(std::isfinite(k) && k > 0.0, "density bound must be positive");
  density_bound_ = k;
  return *this;
}

DistributionModel DistributionModel::empirical(std::span<const double> values) {
  require(!values.empty(), "empirical law of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) require(std::isfinite(v), "empirical law requires finite values");
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  Tabulated tb;
  tb.interpolation = Interpolation::kStep;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    tb.grid.push_back(sorted[i]);
    tb.cdf.push_back(static_cast<double>(i + 1) / n);
  }
  return DistributionModel(std::move(tb));
}

std::string DistributionModel::kind_name() const {
  return std::visit(overloaded{
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const Exponential&) { return std::string("exponential"); },
                        [](const ParetoTail&) { return std::string("pareto_tail"); },
                        [](const PowerPushforward&) { return std::string("power_pushforward"); },
                        [](const Tabulated&) { return std::string("tabulated"); },
                    },
                    kind_);
}

double DistributionModel::cdf(double t) const {
  return std::visit(overloaded{
                        [&](const Uniform& u) { return std::clamp((t - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
                        [&](const Exponential& e) { return t <= 0.0 ? 0.0 : -std::expm1(-e.rate * t); },
                        [&](const ParetoTail& p) { return pareto_cdf(p, t); },
                        [&](const PowerPushforward& p) {
                          if (!p.base) return pareto_cdf(lebesgue_pushforward(p), t);
                          if (t < 1.0) return 0.0;
                          return 1.0 - base_cdf(*p.base, std::pow(t, -1.0 / p.exponent));
                        },
                        [&](const Tabulated& tb) { return tab_cdf(tb, t); },
                    },
                    kind_);
}

double DistributionModel::cdf_left(double t) const {
  if (const auto* tb = std::get_if<Tabulated>(&kind_)) return tab_cdf_left(*tb, t);
  return cdf(t);  // the remaining kinds are continuous
}

double DistributionModel::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  return std::visit(overloaded{
                        [&](const Uniform& m) { return m.lo + u * (m.hi - m.lo); },
                        [&](const Exponential& e) { return -std::log1p(-u) / e.rate; },
                        [&](const ParetoTail& p) { return p.scale * std::pow(1.0 - u, -1.0 / p.exponent); },
                        [&](const PowerPushforward& p) {
                          if (!p.base) {
                            auto par = lebesgue_pushforward(p);
                            return par.scale * std::pow(1.0 - u, -1.0 / par.exponent);
                          }
                          const double x = base_inverse_upper(*p.base, 1.0 - u);
                          return x <= 0.0 ? kInf : std::pow(x, -p.exponent);
                        },
                        [&](const Tabulated& tb) { return tab_quantile(tb, u); },
                    },
                    kind_);
}

double DistributionModel::tail(double t) const {
  if (t < 0.0) return 1.0;
  return std::visit(overloaded{
                        [&](const Uniform&) { return (1.0 - cdf(t)) + cdf(-t); },
                        [&](const Exponential& e) { return std::exp(-e.rate * t); },
                        [&](const ParetoTail& p) { return t < p.scale ? 1.0 : std::pow(p.scale / t, p.exponent); },
                        [&](const PowerPushforward& p) {
                          if (!p.base) {
                            auto par = lebesgue_pushforward(p);
                            return t < par.scale ? 1.0 : std::pow(par.scale / t, par.exponent);
                          }
                          if (t < 1.0) return 1.0;
                          return base_cdf(*p.base, std::pow(t, -1.0 / p.exponent));
                        },
                        [&](const Tabulated& tb) { return (1.0 - tab_cdf(tb, t)) + tab_cdf_left(tb, -t); },
                    },
                    kind_);
}

double DistributionModel::abs_quantile(double u) const {
  if (!(u > 0.0)) return std::max(std::abs(support_lower()), std::abs(support_upper()));
  if (u >= 1.0) return 0.0;
  return std::visit(overloaded{
                        [&](const Uniform& m) {
                          if (m.lo >= 0.0) return m.hi - u * (m.hi - m.lo);
                          return generic_abs_quantile(*this, u);
                        },
                        [&](const Exponential& e) { return -std::log(u) / e.rate; },
                        [&](const ParetoTail& p) { return p.scale * std::pow(u, -1.0 / p.exponent); },
                        [&](const PowerPushforward& p) {
                          if (!p.base) return std::pow(u, -p.exponent);
                          const double x = base_inverse_upper(*p.base, u);
                          return x <= 0.0 ? kInf : std::pow(x, -p.exponent);
                        },
                        [&](const Tabulated&) { return generic_abs_quantile(*this, u); },
                    },
                    kind_);
}

double DistributionModel::quantile_derivative(double u) const {
  return std::visit(overloaded{
                        [&](const Uniform& m) { return m.hi - m.lo; },
                        [&](const Exponential& e) { return 1.0 / (e.rate * (1.0 - u)); },
                        [&](const ParetoTail& p) {
                          return p.scale / p.exponent * std::pow(1.0 - u, -1.0 / p.exponent - 1.0);
                        },
                        [&](const PowerPushforward& p) -> double {
                          if (p.base) throw ValidationError("tabulated pushforward has no differentiable quantile");
                          auto par = lebesgue_pushforward(p);
                          return par.scale / par.exponent * std::pow(1.0 - u, -1.0 / par.exponent - 1.0);
                        },
                        [&](const Tabulated&) -> double {
                          throw ValidationError("tabulated law has no differentiable quantile");
                        },
                    },
                    kind_);
}

double DistributionModel::cdf_integral(double a, double b) const {
  if (!(a <= b)) throw ValidationError("cdf_integral requires a <= b");
  if (a == b) return 0.0;
  return std::visit(overloaded{
                        [&](const Uniform&) { return lower_tail_integral(b) - lower_tail_integral(a); },
                        [&](const Exponential& e) {
                          const double lo = std::max(a, 0.0);
                          if (b <= lo) return 0.0;
                          // (b - lo) minus the tail mass exp(-r lo)(1 - exp(-r (b - lo))) / r
                          return (b - lo) + std::exp(-e.rate * lo) * std::expm1(-e.rate * (b - lo)) / e.rate;
                        },
                        [&](const ParetoTail& p) { return pareto_cdf_integral(p, a, b); },
                        [&](const PowerPushforward& p) {
                          if (!p.base) return pareto_cdf_integral(lebesgue_pushforward(p), a, b);
                          const double lo = std::max(a, 1.0);
                          if (b <= lo) return 0.0;
                          return (b - lo) - base_tail_mass(*p.base, p.exponent, prefix_, lo, b);
                        },
                        [&](const Tabulated& tb) {
                          return tab_antiderivative(tb, prefix_, b) - tab_antiderivative(tb, prefix_, a);
                        },
                    },
                    kind_);
}

double DistributionModel::lower_tail_integral(double t) const {
  return std::visit(overloaded{
                        [&](const Uniform& u) {
                          if (t <= u.lo) return 0.0;
                          const double w = u.hi - u.lo;
                          if (t < u.hi) return (t - u.lo) * (t - u.lo) / (2.0 * w);
                          return 0.5 * w + (t - u.hi);
                        },
                        [&](const Exponential&) { return t <= 0.0 ? 0.0 : cdf_integral(0.0, t); },
                        [&](const ParetoTail& p) { return t <= p.scale ? 0.0 : cdf_integral(p.scale, t); },
                        [&](const PowerPushforward&) { return t <= 1.0 ? 0.0 : cdf_integral(1.0, t); },
                        [&](const Tabulated& tb) { return tab_antiderivative(tb, prefix_, t); },
                    },
                    kind_);
}

ExtendedReal DistributionModel::upper_tail_integral(double t) const {
  return std::visit(overloaded{
                        [&](const Uniform& u) {
                          const double w = u.hi - u.lo;
                          if (t >= u.hi) return ExtendedReal::finite(0.0);
                          if (t <= u.lo) return ExtendedReal::finite((u.lo - t) + 0.5 * w);
                          return ExtendedReal::finite((u.hi - t) * (u.hi - t) / (2.0 * w));
                        },
                        [&](const Exponential& e) {
                          if (t <= 0.0) return ExtendedReal::finite(-t + 1.0 / e.rate);
                          return ExtendedReal::finite(std::exp(-e.rate * t) / e.rate);
                        },
                        [&](const ParetoTail& p) { return pareto_upper(p, t); },
                        [&](const PowerPushforward& p) {
                          if (!p.base) return pareto_upper(lebesgue_pushforward(p), t);
                          return base_upper(*p.base, p.exponent, prefix_, t);
                        },
                        [&](const Tabulated& tb) {
                          const double g0 = tb.grid.front(), g1 = tb.grid.back();
                          const double total = (g1 - g0) - prefix_.back();
                          if (t >= g1) return ExtendedReal::finite(0.0);
                          if (t <= g0) return ExtendedReal::finite((g0 - t) + std::max(0.0, total));
                          const double v = (g1 - t) - (prefix_.back() - tab_antiderivative(tb, prefix_, t));
                          return ExtendedReal::finite(std::max(0.0, v));
                        },
                    },
                    kind_);
}

ExtendedReal DistributionModel::abs_mean() const {
  auto upper = upper_tail_integral(0.0);
  if (upper.is_infinite()) return upper;
  return ExtendedReal::finite(upper.value() + lower_tail_integral(0.0));
}

TailClass DistributionModel::tail_class() const {
  return std::visit(overloaded{
                        [](const Uniform&) { return TailClass::kBounded; },
                        [](const Exponential&) { return TailClass::kExponential; },
                        [](const ParetoTail&) { return TailClass::kPowerLaw; },
                        [](const PowerPushforward& p) {
                          if (p.base && p.base->cdf.front() == 0.0) return TailClass::kBounded;
                          return TailClass::kPowerLaw;
                        },
                        [](const Tabulated&) { return TailClass::kBounded; },
                    },
                    kind_);
}

std::optional<double> DistributionModel::tail_exponent() const {
  return std::visit(overloaded{
                        [](const ParetoTail& p) -> std::optional<double> { return p.exponent; },
                        [](const PowerPushforward& p) -> std::optional<double> {
                          if (!p.base) return 1.0 / p.exponent;
                          if (p.base->cdf.front() == 0.0) return std::nullopt;
                          return p.base->origin_exponent / p.exponent;
                        },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    kind_);
}

QuantileEnvelope DistributionModel::quantile_envelope(double slack) const {
  return std::visit(overloaded{
                        [](const Uniform& u) { return QuantileEnvelope{std::max(std::abs(u.lo), std::abs(u.hi)), 0.0}; },
                        [&](const Exponential& e) {
                          // -log(u) <= u^{-s} / (s e) for every s > 0
                          require(slack > 0.0, "quantile envelope slack must be positive");
                          return QuantileEnvelope{1.0 / (e.rate * slack * std::numbers::e), slack};
                        },
                        [](const ParetoTail& p) { return QuantileEnvelope{p.scale, 1.0 / p.exponent}; },
                        [](const PowerPushforward& p) {
                          if (!p.base) return QuantileEnvelope{1.0, p.exponent};
                          const auto& b = *p.base;
                          const double x1 = b.grid.front();
                          const double g1 = b.cdf.front();
                          if (g1 == 0.0) {
                            auto it = std::find_if(b.cdf.begin(), b.cdf.end(), [](double c) { return c > 0.0; });
                            const std::size_t k = static_cast<std::size_t>(std::distance(b.cdf.begin(), it));
                            return QuantileEnvelope{std::pow(b.grid[k - 1], -p.exponent), 0.0};
                          }
                          const double q = p.exponent / b.origin_exponent;
                          const double d = std::pow(x1, -p.exponent) * std::pow(g1, q);
                          return QuantileEnvelope{std::max(d, std::pow(x1, -p.exponent)), q};
                        },
                        [](const Tabulated& t) {
                          return QuantileEnvelope{std::max(std::abs(t.grid.front()), std::abs(t.grid.back())), 0.0};
                        },
                    },
                    kind_);
}

std::vector<double> DistributionModel::tail_breakpoints() const {
  std::vector<double> pts = std::visit(
      overloaded{
          [](const Uniform& u) { return std::vector<double>{std::abs(u.lo), std::abs(u.hi)}; },
          [](const Exponential&) { return std::vector<double>{}; },
          [](const ParetoTail& p) { return std::vector<double>{p.scale}; },
          [](const PowerPushforward& p) {
            std::vector<double> out{1.0};
            if (p.base) {
              for (double x : p.base->grid) out.push_back(std::pow(x, -p.exponent));
            }
            return out;
          },
          [](const Tabulated& t) {
            std::vector<double> out;
            for (double g : t.grid) out.push_back(std::abs(g));
            return out;
          },
      },
      kind_);
  std::erase_if(pts, [](double t) { return !(t > 0.0) || !std::isfinite(t); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double DistributionModel::support_lower() const {
  return std::visit(overloaded{
                        [](const Uniform& u) { return u.lo; },
                        [](const Exponential&) { return 0.0; },
                        [](const ParetoTail& p) { return p.scale; },
                        [](const PowerPushforward&) { return 1.0; },
                        [](const Tabulated& t) { return t.grid.front(); },
                    },
                    kind_);
}

double DistributionModel::support_upper() const {
  return std::visit(overloaded{
                        [](const Uniform& u) { return u.hi; },
                        [](const Exponential&) { return kInf; },
                        [](const ParetoTail&) { return kInf; },
                        [](const PowerPushforward& p) {
                          if (!p.base || p.base->cdf.front() > 0.0) return kInf;
                          const auto& b = *p.base;
                          auto it = std::find_if(b.cdf.begin(), b.cdf.end(), [](double c) { return c > 0.0; });
                          const std::size_t k = static_cast<std::size_t>(std::distance(b.cdf.begin(), it));
                          return std::pow(b.grid[k - 1], -p.exponent);
                        },
                        [](const Tabulated& t) { return t.grid.back(); },
                    },
                    kind_);
}

}  // namespace wclt
