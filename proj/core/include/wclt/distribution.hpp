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

#ifndef WCLT_DISTRIBUTION_HPP_
#define WCLT_DISTRIBUTION_HPP_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wclt/errors.hpp"

namespace wclt {

// How fast P(|Y| > t) decays. Drives the exponent analysis of the
// summability checks.
enum class TailClass {
  kBounded,      // compact support
  kExponential,  // exp(-c t); quantile of |Y| grows like log(1/u)
  kPowerLaw,     // ~ t^{-r}; see DistributionModel::tail_exponent()
};

// Q_{|Y|}(u) <= coefficient * u^{-inverse_exponent} for every u in (0, 1].
struct QuantileEnvelope {
  double coefficient = 0.0;
  double inverse_exponent = 0.0;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

struct Exponential {
  double rate = 1.0;
};

// P(Y > t) = (scale / t)^exponent for t >= scale; support [scale, inf).
struct ParetoTail {
  double scale = 1.0;
  double exponent = 2.0;
};

// Law of a random point X in [0, 1] given by its CDF G at nodes
// 0 < x_1 < ... < x_m = 1, linear between nodes and
// G(x) = G(x_1) (x / x_1)^origin_exponent on [0, x_1].
struct TabulatedBase {
  std::vector<double> grid;
  std::vector<double> cdf;
  double origin_exponent = 1.0;
};

// Y = X^{-exponent} where X follows Lebesgue measure on (0, 1) (base
// empty) or a tabulated base law.
struct PowerPushforward {
  double exponent = 0.5;
  std::optional<TabulatedBase> base;
};

enum class Interpolation { kLinear, kStep };

// CDF tabulated at strictly increasing nodes. F = 0 left of the first
// node and F = 1 from the last node on. kLinear interpolates between
// nodes; kStep is right-continuous and constant on [t_k, t_{k+1}).
struct Tabulated {
  std::vector<double> grid;
  std::vector<double> cdf;
  Interpolation interpolation = Interpolation::kLinear;
};

// Analytic or tabulated reference law on the real line.
//
// Every kind gives closed-form access to F, its generalized inverse,
// the tail of |Y|, and integrals of F and 1 - F, so that transport
// distances against the model are exact up to rounding.
class DistributionModel {
 public:
  using Kind = std::variant<Uniform, Exponential, ParetoTail, PowerPushforward, Tabulated>;

  explicit DistributionModel(Kind kind);

  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  double cdf(double t) const;
  // F(t-).
  double cdf_left(double t) const;
  // Generalized inverse: inf{t : F(t) >= u}, u in (0, 1).
  double quantile(double u) const;
  // P(|Y| > t) for t >= 0.
  double tail(double t) const;
  // Cadlag inverse of the tail of |Y|: inf{t >= 0 : P(|Y| > t) <= u}.
  double abs_quantile(double u) const;
  // d/du quantile(u); throws ValidationError for tabulated laws.
  double quantile_derivative(double u) const;

  // Integral of F over [a, b], a <= b.
  double cdf_integral(double a, double b) const;
  // Integral of F over (-inf, t].
  double lower_tail_integral(double t) const;
  // Integral of 1 - F over [t, inf); infinite when E[Y^+] is.
  ExtendedReal upper_tail_integral(double t) const;
  // E|Y|.
  ExtendedReal abs_mean() const;

  TailClass tail_class() const;
  // Index r of a power-law tail P(|Y| > t) ~ t^{-r}.
  std::optional<double> tail_exponent() const;
  // For exponential tails `slack` > 0 trades coefficient for exponent.
  QuantileEnvelope quantile_envelope(double slack = 1e-3) const;

  // Points t >= 0 where tail() is not smooth; used to split quadrature.
  std::vector<double> tail_breakpoints() const;
  // Smallest / largest possible values of Y (may be infinite).
  double support_lower() const;
  double support_upper() const;

  // Bound K on the density, when known. Carried as metadata only.
  std::optional<double> density_bound() const { return density_bound_; }
  DistributionModel& set_density_bound(double k);

  // Step CDF of a sample.
  static DistributionModel empirical(std::span<const double> values);

 private:
  struct Impl;
  Kind kind_;
  std::optional<double> density_bound_;
  std::vector<double> prefix_;  // cached node integrals for tabulated kinds
};

}  // namespace wclt

#endif  // WCLT_DISTRIBUTION_HPP_
