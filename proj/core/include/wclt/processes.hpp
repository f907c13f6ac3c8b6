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

#ifndef WCLT_PROCESSES_HPP_
#define WCLT_PROCESSES_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wclt/distribution.hpp"
#include "wclt/rng.hpp"

namespace wclt {

// Coefficients (a_j)_{j >= 0} of a causal linear process.
struct GeometricCoefficients {
  double rho = 0.5;    // a_j = scale * rho^j, rho in [0, 1)
  double scale = 1.0;
};

struct PolynomialCoefficients {
  double beta = 2.0;   // a_j = scale * (j + offset)^{-beta}, beta > 1
  double offset = 1.0;
  double scale = 1.0;
};

class CoeffFamily {
 public:
  using Kind = std::variant<GeometricCoefficients, PolynomialCoefficients>;

  explicit CoeffFamily(Kind kind);

  const Kind& kind() const { return kind_; }
  double operator()(std::size_t j) const;
  // Upper bound on sum_{j > J} |a_j| from the family's closed form.
  double abs_tail_bound(std::size_t J) const;
  double abs_sum() const;
  // Smallest J >= 1 with abs_tail_bound(J) < tol.
  std::size_t truncation_for(double tol) const;

 private:
  Kind kind_;
};

struct IidProcess {
  DistributionModel model;
};

struct IntermittentMapProcess {
  double gamma = 0.25;
  double observable_exponent = 0.2;  // Y = x^{-a}
  std::size_t burn_in = 10000;
};

struct DoublingMapProcess {
  double observable_exponent = 0.25;  // Y = x^{-a}
  std::size_t burn_in = 10000;
};

struct CausalLinearProcess {
  CoeffFamily coefficients;
  DistributionModel innovation;
  std::size_t truncation = 0;  // 0: smallest J with tail sum < 1e-8
};

using ProcessSpec = std::variant<IidProcess, IntermittentMapProcess, DoublingMapProcess, CausalLinearProcess>;

// Validates parameter ranges; throws ValidationError.
void validate(const ProcessSpec& spec);

// Truncation J actually used for a causal linear process.
std::size_t effective_truncation(const CausalLinearProcess& p);

struct Path {
  std::vector<double> values;
  ProcessSpec spec;
  std::uint64_t seed = 0;
  double truncation_error_bound = 0.0;
  // Map states that hit the fixed point 0 exactly and were redrawn.
  std::size_t reseeded_states = 0;
};

// Intermittent map: x (1 + 2^gamma x^gamma) on (0, 1/2), 2x - 1 on
// [1/2, 1). The result is clamped to [2^-53, 1 - 2^-53].
double intermittent_step(double x, double gamma);

// Streaming generator; `generate` is a thin wrapper over it. Values
// produced by next() are a deterministic function of (spec, seed).
class ProcessStream {
 public:
  ProcessStream(const ProcessSpec& spec, std::uint64_t seed);

  double next();
  // Current map state x in (0, 1); zero for non-map processes.
  double state() const { return x_; }
  std::size_t reseeded_states() const { return reseeded_; }

 private:
  void advance_map();
  double doubling_state() const;

  ProcessSpec spec_;
  Rng rng_;
  double x_ = 0.0;
  std::size_t reseeded_ = 0;
  // doubling map: 128-bit fractional state, most significant word first
  std::array<std::uint64_t, 2> words_{};
  std::uint64_t refill_ = 0;
  int refill_bits_ = 0;
  // causal linear process
  std::vector<double> coeffs_;
  std::vector<double> ring_;
  std::size_t head_ = 0;
};

// n >= 1 values of the stationary sequence.
Path generate(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

// Map states x_1..x_n after burn-in (maps only).
std::vector<double> generate_orbit(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

// Piecewise-linear CDF of one long path evaluated on `grid`.
DistributionModel calibrate_reference_cdf(const ProcessSpec& spec, std::size_t length, std::span<const double> grid,
                                          std::uint64_t seed);

// Reference law of Y = x^{-a} for a map process: tabulates the invariant
// law of the map state on a log/linear grid from one long orbit, and
// extends it below the first well-populated node as G(x) ~ x^{kappa}
// with kappa = 1 - gamma (intermittent) or 1 (doubling).
DistributionModel calibrate_map_reference(const ProcessSpec& spec, std::size_t length, std::uint64_t seed,
                                          std::size_t min_origin_count = 1000);

std::string describe(const ProcessSpec& spec);

}  // namespace wclt

#endif  // WCLT_PROCESSES_HPP_
