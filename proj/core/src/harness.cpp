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

#include "wclt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wclt/errors.hpp"
#include "wclt/parallel.hpp"
#include "wclt/rng.hpp"
#include "wclt/transport.hpp"

namespace wclt {
namespace {

bool is_map(const ProcessSpec& spec) {
  return std::holds_alternative<IntermittentMapProcess>(spec) || std::holds_alternative<DoublingMapProcess>(spec);
}

std::size_t auto_calibration_length(const ExperimentConfig& cfg) {
  if (cfg.reference.calibration_length > 0) return cfg.reference.calibration_length;
  const std::size_t largest = cfg.n_values.empty() ? 0 : cfg.n_values.back();
  return std::max<std::size_t>(10 * largest, 1'000'000);
}

// CDF nodes for a linear-process calibration: quantiles of a pilot path.
std::vector<double> pilot_grid(const ProcessSpec& spec, std::size_t length, std::uint64_t seed) {
  Path pilot = generate(spec, std::min<std::size_t>(length, 200'000), seed);
  std::vector<double> v = std::move(pilot.values);
  std::sort(v.begin(), v.end());
  const double span = v.back() - v.front();
  const double pad = span > 0 ? 0.5 * span : 1.0;
  std::vector<double> grid;
  constexpr std::size_t kNodes = 2048;
  grid.push_back(v.front() - pad);
  for (std::size_t k = 1; k < kNodes; ++k) grid.push_back(v[k * (v.size() - 1) / kNodes]);
  grid.push_back(v.back() + pad);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

DistributionModel calibrate(const ProcessSpec& spec, std::size_t length, std::uint64_t base, std::uint64_t index,
                            const std::vector<double>& grid) {
  const std::uint64_t seed = derive_seed(base, streams::kCalibration, index);
  if (is_map(spec)) return calibrate_map_reference(spec, length, seed);
  return calibrate_reference_cdf(spec, length, grid, seed);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.schema_version != 1) throw ValidationError("unsupported schema_version " + std::to_string(cfg.schema_version));
  validate(cfg.process);
  if (cfg.n_values.empty()) throw ValidationError("n_values must be nonempty");
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    if (cfg.n_values[i] == 0) throw ValidationError("n_values must be positive");
    if (i > 0 && cfg.n_values[i] <= cfg.n_values[i - 1]) throw ValidationError("n_values must be increasing");
  }
  if (cfg.n_values.size() > (std::size_t{1} << 31)) throw ValidationError("too many n_values");
  if (cfg.replications < 2) throw ValidationError("replications must be at least 2");
  if (cfg.replications >= (std::size_t{1} << 32)) throw ValidationError("replications must be below 2^32");
  if (cfg.grid.size == 0) throw ValidationError("grid.size must be positive");
  if (!(cfg.grid.tail_tol > 0)) throw ValidationError("grid.tail_tol must be positive");
  if (cfg.limit.replications == 0) throw ValidationError("limit.replications must be positive");
  const bool analytic = cfg.reference.model.has_value() || std::holds_alternative<IidProcess>(cfg.process);
  if (!analytic && !cfg.reference.calibrate)
    throw ValidationError("reference CDF unavailable: give reference.model or set reference.calibrate");
}

Reference resolve_reference(const ExperimentConfig& cfg) {
  if (cfg.reference.model) return Reference{*cfg.reference.model};
  if (const auto* iid = std::get_if<IidProcess>(&cfg.process)) return Reference{iid->model};
  if (!cfg.reference.calibrate)
    throw ValidationError("reference CDF unavailable: give reference.model or set reference.calibrate");

  const std::size_t length = auto_calibration_length(cfg);
  std::vector<double> grid;
  if (!is_map(cfg.process)) grid = pilot_grid(cfg.process, length, derive_seed(cfg.base_seed, streams::kCalibration, 99));
  Reference ref{calibrate(cfg.process, length, cfg.base_seed, 0, grid)};
  ref.calibrated = true;
  ref.calibration_length = length;

  // Two independent half-length calibrations, compared at 999 quantiles
  // of the main one.
  const DistributionModel h1 = calibrate(cfg.process, length / 2, cfg.base_seed, 1, grid);
  const DistributionModel h2 = calibrate(cfg.process, length / 2, cfg.base_seed, 2, grid);
  double gap = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double t = ref.model.quantile(k / 1000.0);
    gap = std::max(gap, std::abs(h1.cdf(t) - h2.cdf(t)));
  }
  ref.calibration_error = gap;
  return ref;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t n_index, std::size_t r) {
  return derive_seed(base_seed, streams::kReplication, (static_cast<std::uint64_t>(n_index) << 32) | r);
}

std::vector<StatisticSample> run_clt_experiment(const ExperimentConfig& cfg, const DistributionModel& reference) {
  validate(cfg);
  const std::string spec = describe(cfg.process);
  std::vector<StatisticSample> out;
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    const std::size_t n = cfg.n_values[ni];
    StatisticSample s;
    s.kind = StatisticKind::kFiniteN;
    s.n = n;
    s.seed = cfg.base_seed;
    s.spec = spec;
    s.values.assign(cfg.replications, 0.0);
    const double root_n = std::sqrt(static_cast<double>(n));
    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
      Path p = generate(cfg.process, n, replicate_seed(cfg.base_seed, ni, r));
      const SortedSample sorted(std::move(p.values));
      s.values[r] = root_n * w1_sample_vs_model(sorted, reference).require_finite("T_n");
    });
    out.push_back(std::move(s));
  }
  return out;
}

ExperimentResult run_clt_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  Reference ref = resolve_reference(cfg);
  std::vector<StatisticSample> samples = run_clt_experiment(cfg, ref.model);
  return ExperimentResult{std::move(samples), std::move(ref)};
}

std::optional<MixingBound> default_mixing_bound(const ProcessSpec& spec) {
  if (std::holds_alternative<DoublingMapProcess>(spec)) return MixingBound(PhiGeometric{1.0, 0.5});
  if (const auto* p = std::get_if<IntermittentMapProcess>(&spec)) return MixingBound(AlphaPolynomial{1.0, p->gamma});
  if (const auto* p = std::get_if<CausalLinearProcess>(&spec)) {
    if (const auto* g = std::get_if<GeometricCoefficients>(&p->coefficients.kind()))
      return MixingBound(PhiGeometric{1.0, g->rho});
  }
  return std::nullopt;
}

LimitResult run_limit(const ExperimentConfig& cfg, const DistributionModel& reference) {
  validate(cfg);
  LimitResult out;
  out.grid = make_grid(reference, cfg.grid.size, cfg.grid.scheme, cfg.grid.tail_tol, cfg.grid.tail_points);
  if (std::holds_alternative<IidProcess>(cfg.process)) {
    out.covariance = covariance_iid(reference, out.grid.points);
  } else {
    std::size_t K = 0;
    if (cfg.limit.lag_cutoff) {
      K = *cfg.limit.lag_cutoff;
    } else if (auto bound = default_mixing_bound(cfg.process)) {
      K = lag_cutoff_for(*bound);
    } else {
      throw ValidationError("limit.K is required: the process has no default decay bound");
    }
    out.covariance = covariance_dependent(cfg.process, out.grid.points, K, cfg.limit.sim_length,
                                          derive_seed(cfg.base_seed, streams::kLimitPath, 0));
  }
  out.covariance.tail_bias_bound = out.grid.tail_bias_bound;
  out.sample = sample_limit_functional(out.covariance, cfg.limit.replications,
                                       derive_seed(cfg.base_seed, streams::kLimitSampling, 0), cfg.threads);
  out.sample.spec = describe(cfg.process);
  return out;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ComparisonReport compare_distributions(const StatisticSample& a, const StatisticSample& b) {
  if (a.values.empty() || b.values.empty()) throw ValidationError("compare_distributions: empty sample");
  ComparisonReport r;
  r.ks_two_sample = ks_two_sample(a.values, b.values);
  r.w1_between_statistics = w1_two_samples(SortedSample(a.values), SortedSample(b.values));
  const auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  r.mean_gap = std::abs(mean(a.values) - mean(b.values));
  const double na = static_cast<double>(a.values.size()), nb = static_cast<double>(b.values.size());
  r.ks_critical_5pct = 1.358 * std::sqrt((na + nb) / (na * nb));
  r.rows.push_back(ComparisonRow{a.n, r.ks_two_sample, r.w1_between_statistics, r.mean_gap, median(a.values)});
  r.verdict = (r.ks_two_sample <= r.ks_critical_5pct ? "consistent at 5%: ks " : "differs at 5%: ks ") +
              fmt(r.ks_two_sample) + " vs critical " + fmt(r.ks_critical_5pct);
  return r;
}

ComparisonReport compare_experiment(const std::vector<StatisticSample>& finite_n, const StatisticSample& limit) {
  if (finite_n.empty()) throw ValidationError("compare_experiment: no finite-n samples");
  ComparisonReport out;
  for (const auto& s : finite_n) {
    ComparisonReport one = compare_distributions(s, limit);
    out.rows.push_back(one.rows.front());
    out.ks_two_sample = one.ks_two_sample;
    out.w1_between_statistics = one.w1_between_statistics;
    out.mean_gap = one.mean_gap;
    out.ks_critical_5pct = one.ks_critical_5pct;
    out.verdict = "n = " + std::to_string(s.n) + ": " + one.verdict;
  }
  return out;
}

std::string probe_verdict(const std::vector<double>& medians, double threshold) {
  if (medians.size() < 2) return "insufficient data";
  bool increasing = true;
  bool stable = true;
  for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
    const double ratio = medians[i + 1] / medians[i];
    if (!(medians[i + 1] > medians[i])) increasing = false;
    if (!(ratio >= 0.8 && ratio <= 1.25)) stable = false;
  }
  if (medians.size() >= 3 && increasing && medians.back() / medians.front() >= threshold) return "non-stabilizing";
  if (stable) return "stabilizing";
  return "undetermined";
}

ProbeReport divergence_probe(double gamma, double a, const std::vector<std::size_t>& n_values, std::size_t R,
                             std::uint64_t seed, double threshold, std::size_t threads) {
  if (!(threshold > 1.0)) throw ValidationError("threshold must exceed 1");
  ProbeReport rep;
  rep.gamma = gamma;
  rep.a = a;
  rep.n_values = n_values;
  rep.threshold = threshold;
  if (n_values.size() < 2) {
    rep.verdict = "insufficient data";
    return rep;
  }
  ExperimentConfig cfg;
  cfg.process = IntermittentMapProcess{gamma, a};
  cfg.n_values = n_values;
  cfg.replications = R;
  cfg.base_seed = seed;
  cfg.threads = threads;
  cfg.reference.calibrate = true;
  const ExperimentResult res = run_clt_experiment(cfg);
  for (const auto& s : res.samples) rep.medians.push_back(median(s.values));
  for (std::size_t i = 0; i + 1 < rep.medians.size(); ++i) rep.ratios.push_back(rep.medians[i + 1] / rep.medians[i]);
  rep.cumulative_factor = rep.medians.back() / rep.medians.front();
  rep.verdict = probe_verdict(rep.medians, threshold);
  rep.calibration_error = res.reference.calibration_error;
  return rep;
}

}  // namespace wclt
