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

#ifndef WCLT_LIMITLAW_HPP_
#define WCLT_LIMITLAW_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wclt/conditions.hpp"
#include "wclt/distribution.hpp"
#include "wclt/processes.hpp"

namespace wclt {

enum class GridScheme { kQuantile, kUniform };

const char* to_string(GridScheme s);
GridScheme grid_scheme_from_string(const std::string& name);

struct Grid {
  std::vector<double> points;
  std::size_t bulk_points = 0;
  // Bound on E of the integral of |G| outside [points.front(), points.back()]
  // when C(t, t) <= F(t)(1 - F(t)); infinite for heavy tails.
  double tail_bias_bound = 0.0;
};

// `size` bulk points at quantile(( i - 1/2) / size) (or uniform between
// the 1/(2 size) and 1 - 1/(2 size) quantiles), plus the finite support
// ends, plus `tail_points` geometrically spaced points into an unbounded
// upper tail, far enough that the tail integral of sqrt(P(|Y| > t)) left
// out is below `tail_tol`.
Grid make_grid(const DistributionModel& m, std::size_t size, GridScheme scheme = GridScheme::kQuantile,
               double tail_tol = 1e-3, std::size_t tail_points = 64);

// Trapezoid weights on the grid; a single point gets weight 1.
std::vector<double> trapezoid_weights(std::span<const double> grid);

struct PsdRepair {
  double jitter_added = 0.0;
  // eigenvalues below -1e-12 * trace that were set to zero
  std::size_t eigenvalues_clipped = 0;
  double min_eigenvalue = 0.0;
};

enum class CovarianceSource { kAnalyticIid, kSimulatedDependent };

const char* to_string(CovarianceSource s);

// Limit covariance C(s, t) on a grid, with the factor used for sampling.
struct CovarianceGrid {
  std::vector<double> grid;
  Eigen::MatrixXd matrix;
  std::size_t lag_cutoff = 0;
  PsdRepair psd_repair;
  CovarianceSource source = CovarianceSource::kAnalyticIid;
  double tail_bias_bound = 0.0;
  // matrix = factor * factor^T
  Eigen::MatrixXd factor;
};

// Symmetric eigendecomposition, negative eigenvalues clipped to zero;
// escalating diagonal jitter (1e-12 * trace * 10^j) only when the
// decomposition itself fails. Fills matrix, factor and psd_repair.
void repair_and_factor(CovarianceGrid& cg);

// F(s ^ t) - F(s) F(t).
CovarianceGrid covariance_iid(const DistributionModel& m, std::span<const double> grid);

// F(s ^ t) - F(s) F(t) + sum_{k=1}^{K} [cov_k(t, s) + cov_k(s, t)],
// cov_k(t, s) = P(Y_0 <= t, Y_k <= s) - F(t) F(s), all estimated along one
// path of length sim_length; requires K < sim_length / 10.
CovarianceGrid covariance_dependent(const ProcessSpec& spec, std::span<const double> grid, std::size_t K,
                                    std::size_t sim_length, std::uint64_t seed);

// Smallest K with sum_{k > K} bound(k) < tol.
std::size_t lag_cutoff_for(const MixingBound& b, double tol = 1e-3);

enum class StatisticKind { kFiniteN, kLimitFunctional };

const char* to_string(StatisticKind k);

struct StatisticSample {
  std::vector<double> values;
  StatisticKind kind = StatisticKind::kFiniteN;
  std::size_t n = 0;  // sample size behind T_n; 0 for the limit
  std::uint64_t seed = 0;
  std::string spec;   // JSON description of what produced the sample
};

// R draws of the trapezoid integral of |G| over the grid, G ~ N(0, C).
// Replicate r uses its own generator derive_seed(seed, kLimitSampling, r).
StatisticSample sample_limit_functional(const CovarianceGrid& cg, std::size_t R, std::uint64_t seed,
                                        std::size_t threads = 0);

// R draws of the integral of |B(u)| quantile'(u) du for a Brownian bridge B
// on `mesh` equally spaced interior points of (0, 1), built by exact
// sequential bridge sampling.
StatisticSample brownian_bridge_oracle(const DistributionModel& m, std::size_t R, std::size_t mesh,
                                       std::uint64_t seed, std::size_t threads = 0);

}  // namespace wclt

#endif  // WCLT_LIMITLAW_HPP_
