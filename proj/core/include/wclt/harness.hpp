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

#ifndef WCLT_HARNESS_HPP_
#define WCLT_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wclt/conditions.hpp"
#include "wclt/distribution.hpp"
#include "wclt/limitlaw.hpp"
#include "wclt/processes.hpp"

namespace wclt {

struct GridConfig {
  std::size_t size = 256;
  GridScheme scheme = GridScheme::kQuantile;
  double tail_tol = 1e-3;
  std::size_t tail_points = 64;
};

struct LimitConfig {
  std::optional<std::size_t> lag_cutoff;  // default: from the process's decay bound
  std::size_t sim_length = 1'000'000;
  std::size_t replications = 10'000;
};

struct ReferenceConfig {
  std::optional<DistributionModel> model;
  bool calibrate = false;
  std::size_t calibration_length = 0;  // 0: 10x the largest n, at least 10^6
};

struct OutputConfig {
  std::string dir = ".";
  std::string prefix = "experiment";
};

struct ExperimentConfig {
  int schema_version = 1;
  ProcessSpec process = IidProcess{DistributionModel(Uniform{})};
  std::vector<std::size_t> n_values;
  std::size_t replications = 2;
  std::uint64_t base_seed = 0;
  std::size_t threads = 0;
  GridConfig grid;
  LimitConfig limit;
  ReferenceConfig reference;
  OutputConfig output;
};

// Throws ValidationError on an inconsistent config.
void validate(const ExperimentConfig& cfg);

struct Reference {
  DistributionModel model;
  bool calibrated = false;
  std::size_t calibration_length = 0;
  // sup-gap between two independent half-length calibrations; 0 when
  // the reference is analytic
  double calibration_error = 0.0;
};

// The analytic model when one is configured or the process is iid,
// otherwise a calibration from an independent orbit when requested.
// Throws ValidationError when neither is available.
Reference resolve_reference(const ExperimentConfig& cfg);

// Seed of replicate r at n_values[n_index]:
//   derive_seed(base_seed, kReplication, (n_index << 32) | r).
std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t n_index, std::size_t r);

struct ExperimentResult {
  std::vector<StatisticSample> samples;  // one per n, in config order
  Reference reference;
};

// R replicates of T_n = sqrt(n) * w1_sample_vs_model(path, reference)
// for each n.
ExperimentResult run_clt_experiment(const ExperimentConfig& cfg);
std::vector<StatisticSample> run_clt_experiment(const ExperimentConfig& cfg, const DistributionModel& reference);

// Decay bound implied by the process: geometric phi for the doubling map
// (rho = 1/2), polynomial alpha for the intermittent map, the coefficient
// decay for geometric linear processes. Empty when none applies.
std::optional<MixingBound> default_mixing_bound(const ProcessSpec& spec);

struct LimitResult {
  Grid grid;
  CovarianceGrid covariance;
  StatisticSample sample;
};

// Grid from the reference, covariance (analytic for iid, simulated
// otherwise) and cfg.limit.replications draws of the limit functional.
LimitResult run_limit(const ExperimentConfig& cfg, const DistributionModel& reference);

struct ComparisonRow {
  std::size_t n = 0;
  double ks = 0.0;
  double w1 = 0.0;
  double mean_gap = 0.0;
  double median = 0.0;
};

struct ComparisonReport {
  double ks_two_sample = 0.0;
  double w1_between_statistics = 0.0;
  double mean_gap = 0.0;
  double ks_critical_5pct = 0.0;
  std::vector<ComparisonRow> rows;
  std::string verdict;
};

double ks_two_sample(std::span<const double> a, std::span<const double> b);
double median(std::span<const double> values);

ComparisonReport compare_distributions(const StatisticSample& a, const StatisticSample& b);
// One row per finite-n sample against the same limit sample; the summary
// fields describe the largest n.
ComparisonReport compare_experiment(const std::vector<StatisticSample>& finite_n, const StatisticSample& limit);

struct ProbeReport {
  double gamma = 0.0;
  double a = 0.0;
  std::vector<std::size_t> n_values;
  std::vector<double> medians;
  std::vector<double> ratios;  // medians[i + 1] / medians[i]
  double cumulative_factor = 0.0;
  double threshold = 1.5;
  std::string verdict;  // non-stabilizing | stabilizing | insufficient data | undetermined
  double calibration_error = 0.0;
};

// Verdict from medians alone; exposed for testing.
std::string probe_verdict(const std::vector<double>& medians, double threshold = 1.5);

ProbeReport divergence_probe(double gamma, double a, const std::vector<std::size_t>& n_values, std::size_t R,
                             std::uint64_t seed, double threshold = 1.5, std::size_t threads = 0);

}  // namespace wclt

#endif  // WCLT_HARNESS_HPP_
