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

#include "wclt/limitlaw.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wclt/errors.hpp"
#include "wclt/parallel.hpp"
#include "wclt/quadrature.hpp"
#include "wclt/rng.hpp"
#include "wclt/transport.hpp"

namespace wclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBatch = 256;

double sqrt_tail_beyond(const DistributionModel& m, double t) {
  auto bps = m.tail_breakpoints();
  auto f = [&m](double x) { return std::sqrt(m.tail(x)); };
  return quadrature::piecewise(f, t, kInf, bps, 1e-8).value;
}

std::vector<double> strictly_increasing(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const char* to_string(GridScheme s) {
  switch (s) {
    case GridScheme::kQuantile: return "quantile";
    case GridScheme::kUniform: return "uniform";
  }
  return "?";
}

GridScheme grid_scheme_from_string(const std::string& name) {
  if (name == "quantile") return GridScheme::kQuantile;
  if (name == "uniform") return GridScheme::kUniform;
  throw ValidationError("unknown grid scheme '" + name + "'");
}

const char* to_string(CovarianceSource s) {
  switch (s) {
    case CovarianceSource::kAnalyticIid: return "analytic_iid";
    case CovarianceSource::kSimulatedDependent: return "simulated_dependent";
  }
  return "?";
}

const char* to_string(StatisticKind k) {
  switch (k) {
    case StatisticKind::kFiniteN: return "finite_n";
    case StatisticKind::kLimitFunctional: return "limit_functional";
  }
  return "?";
}

Grid make_grid(const DistributionModel& m, std::size_t size, GridScheme scheme, double tail_tol,
               std::size_t tail_points) {
  if (size == 0) throw ValidationError("grid size must be positive");
  if (!(tail_tol > 0)) throw ValidationError("tail tolerance must be positive");

  std::vector<double> pts;
  pts.reserve(size + tail_points + 2);
  const double h = 1.0 / static_cast<double>(size);
  if (scheme == GridScheme::kQuantile || size == 1) {
    for (std::size_t i = 0; i < size; ++i) pts.push_back(m.quantile((static_cast<double>(i) + 0.5) * h));
  } else {
    const double lo = m.quantile(0.5 * h);
    const double hi = m.quantile(1.0 - 0.5 * h);
    for (std::size_t i = 0; i < size; ++i)
      pts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(size - 1));
  }

  Grid g;
  g.bulk_points = size;
  const double lower = m.support_lower();
  const double upper = m.support_upper();
  if (std::isfinite(lower)) {
    pts.push_back(lower);
  } else {
    g.tail_bias_bound = kInf;
  }

  if (std::isfinite(upper)) {
    pts.push_back(upper);
  } else {
    const double top = *std::max_element(pts.begin(), pts.end());
    const double start = top > 0 ? top : 1.0;
    double end = start;
    double left_out = kInf;
    const bool heavy = lambda21(m).is_infinite();
    if (heavy) {
      end = start * 1e6;
    } else {
      for (int j = 0; j < 200; ++j) {
        end *= 2.0;
        left_out = sqrt_tail_beyond(m, end);
        if (left_out < tail_tol) break;
      }
    }
    const double ratio = std::pow(end / start, 1.0 / static_cast<double>(std::max<std::size_t>(tail_points, 1)));
    double t = start;
    for (std::size_t i = 0; i < tail_points; ++i) {
      t *= ratio;
      pts.push_back(t);
    }
    if (tail_points > 0) pts.back() = end;
    g.tail_bias_bound += std::sqrt(2.0 / std::numbers::pi) * left_out;
  }
  g.points = strictly_increasing(std::move(pts));
  return g;
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
  const std::size_t m = grid.size();
  if (m == 0) throw ValidationError("empty grid");
  if (m == 1) return {1.0};
  std::vector<double> w(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double d = 0.5 * (grid[i + 1] - grid[i]);
    w[i] += d;
    w[i + 1] += d;
  }
  return w;
}

void repair_and_factor(CovarianceGrid& cg) {
  const Eigen::Index m = cg.matrix.rows();
  if (m == 0 || cg.matrix.cols() != m) throw ValidationError("covariance matrix must be square and non-empty");

  // Rows that vanish identically (points outside the observed range) stay
  // exactly zero; only the remaining block is decomposed.
  std::vector<Eigen::Index> live;
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(cg.matrix.row(i).array() == 0.0).all()) live.push_back(i);
  const auto k = static_cast<Eigen::Index>(live.size());

  cg.psd_repair = PsdRepair{};
  cg.factor = Eigen::MatrixXd::Zero(m, m);
  if (k == 0) return;

  Eigen::MatrixXd block(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) block(a, b) = cg.matrix(live[a], live[b]);
  const double trace = std::max(std::abs(block.trace()), std::numeric_limits<double>::min());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  Eigen::MatrixXd work = block;
  double jitter = 0.0;
  for (int j = 0;; ++j) {
    solver.compute(work);
    if (solver.info() == Eigen::Success) break;
    if (j >= 8) throw NumericalError("eigendecomposition of the covariance failed after jitter");
    jitter = 1e-12 * trace * std::pow(10.0, j);
    work = block;
    work.diagonal().array() += jitter;
  }

  Eigen::VectorXd lambda = solver.eigenvalues();
  cg.psd_repair.jitter_added = jitter;
  cg.psd_repair.min_eigenvalue = std::min(lambda.minCoeff(), 0.0);
  const double threshold = -1e-12 * trace;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (lambda[i] < threshold) ++cg.psd_repair.eigenvalues_clipped;
    lambda[i] = std::sqrt(std::max(lambda[i], 0.0));
  }
  const Eigen::MatrixXd f = solver.eigenvectors() * lambda.asDiagonal();
  for (Eigen::Index a = 0; a < k; ++a) cg.factor.row(live[a]).head(k) = f.row(a);
  if (cg.psd_repair.eigenvalues_clipped > 0 || jitter > 0) cg.matrix = cg.factor * cg.factor.transpose();
}

CovarianceGrid covariance_iid(const DistributionModel& m, std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("empty grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ValidationError("grid must be sorted");
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<double> F(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) F[i] = m.cdf(grid[i]);

  CovarianceGrid cg;
  cg.grid.assign(grid.begin(), grid.end());
  cg.source = CovarianceSource::kAnalyticIid;
  cg.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double c = F[static_cast<std::size_t>(i)] * (1.0 - F[static_cast<std::size_t>(j)]);
      cg.matrix(i, j) = c;
      cg.matrix(j, i) = c;
    }
  repair_and_factor(cg);
  return cg;
}

CovarianceGrid covariance_dependent(const ProcessSpec& spec, std::span<const double> grid, std::size_t K,
                                    std::size_t sim_length, std::uint64_t seed) {
  validate(spec);
  if (grid.empty()) throw ValidationError("empty grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ValidationError("grid must be sorted");
  if (sim_length == 0 || K >= sim_length / 10)
    throw ValidationError("lag cutoff K must be below sim_length / 10");

  const std::size_t m = grid.size();
  const std::size_t bins = m + 1;
  // Bin b of y is the number of grid points below y, so y <= t_i iff i >= b.
  std::vector<std::uint64_t> marginal(bins, 0);
  std::vector<std::uint64_t> joint(K > 0 ? bins * bins : 0, 0);
  std::vector<std::uint32_t> ring(K, 0);

  ProcessStream stream(spec, seed);
  for (std::size_t i = 0; i < sim_length; ++i) {
    const double y = stream.next();
    const auto b = static_cast<std::uint32_t>(std::lower_bound(grid.begin(), grid.end(), y) - grid.begin());
    ++marginal[b];
    if (K == 0) continue;
    if (i >= K) {
      // ring holds bins of Y_{i-K} .. Y_{i-1}; slot i % K is Y_{i-K}
      for (std::size_t k = 1; k <= K; ++k) ++joint[ring[(i - k) % K] * bins + b];
    }
    ring[i % K] = b;
  }

  std::vector<double> F(m);
  {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < m; ++i) {
      acc += marginal[i];
      F[i] = static_cast<double>(acc) / static_cast<double>(sim_length);
    }
  }

  const auto n = static_cast<Eigen::Index>(m);
  CovarianceGrid cg;
  cg.grid.assign(grid.begin(), grid.end());
  cg.source = CovarianceSource::kSimulatedDependent;
  cg.lag_cutoff = K;
  cg.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) cg.matrix(i, j) = F[static_cast<std::size_t>(std::min(i, j))] - F[static_cast<std::size_t>(i)] * F[static_cast<std::size_t>(j)];

  if (K > 0) {
    // S(i, j) = sum_k P(Y_0 <= t_i, Y_k <= t_j), by 2-d prefix sums.
    const double pairs = static_cast<double>(sim_length - K);
    Eigen::MatrixXd S(n, n);
    std::vector<double> col(bins, 0.0);
    for (std::size_t b0 = 0; b0 < m; ++b0) {
      double run = 0.0;
      for (std::size_t bk = 0; bk < m; ++bk) {
        run += static_cast<double>(joint[b0 * bins + bk]);
        col[bk] += run;
      }
      for (std::size_t j = 0; j < m; ++j) S(static_cast<Eigen::Index>(b0), static_cast<Eigen::Index>(j)) = col[j] / pairs;
    }
    const double lags = static_cast<double>(K);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) cg.matrix(i, j) += S(i, j) + S(j, i) - 2.0 * lags * F[static_cast<std::size_t>(i)] * F[static_cast<std::size_t>(j)];
  }
  // An indicator that is constant along the path has no covariance.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double Fi = F[static_cast<std::size_t>(i)];
    if (Fi == 0.0 || Fi == 1.0) {
      cg.matrix.row(i).setZero();
      cg.matrix.col(i).setZero();
    }
  }
  cg.matrix = 0.5 * (cg.matrix + cg.matrix.transpose()).eval();
  repair_and_factor(cg);
  return cg;
}

std::size_t lag_cutoff_for(const MixingBound& b, double tol) {
  if (!(tol > 0)) throw ValidationError("tolerance must be positive");
  constexpr std::size_t kMaxLag = 10'000'000;
  return std::visit(
      [&](const auto& k) -> std::size_t {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PhiGeometric>) {
          if (k.c1 == 0 || k.rho == 0) return 0;
          for (std::size_t K = 0; K <= kMaxLag; ++K)
            if (k.c1 * std::pow(k.rho, static_cast<double>(K + 1)) / (1.0 - k.rho) < tol) return K;
        } else if constexpr (std::is_same_v<T, AlphaPolynomial>) {
          const double p = (1.0 - k.gamma) / k.gamma;
          if (p <= 1.0) throw ValidationError("mixing bound is not summable; no finite lag cutoff");
          // sum_{k > K} c (k + 1)^{-p} <= c (K + 1)^{1 - p} / (p - 1)
          const double K = std::ceil(std::pow(tol * (p - 1.0) / k.c_gamma, 1.0 / (1.0 - p)) - 1.0);
          const double lag = std::max(K, 0.0);
          if (lag <= static_cast<double>(kMaxLag)) {
            auto L = static_cast<std::size_t>(lag);
            while (L > 0 && k.c_gamma * std::pow(static_cast<double>(L), 1.0 - p) / (p - 1.0) < tol) --L;
            while (k.c_gamma * std::pow(static_cast<double>(L + 1), 1.0 - p) / (p - 1.0) >= tol) ++L;
            return L;
          }
        } else {
          if (k.value == 0) return 0;
          throw ValidationError("constant mixing bound is not summable; no finite lag cutoff");
        }
        throw NumericalError("lag cutoff exceeds 1e7");
      },
      b.kind());
}

StatisticSample sample_limit_functional(const CovarianceGrid& cg, std::size_t R, std::uint64_t seed,
                                        std::size_t threads) {
  if (R == 0) throw ValidationError("number of replicates must be positive");
  const auto m = static_cast<Eigen::Index>(cg.grid.size());
  if (m == 0 || cg.factor.rows() != m || cg.factor.cols() != m)
    throw ValidationError("covariance grid has no factor; call repair_and_factor");
  const std::vector<double> w = trapezoid_weights(cg.grid);
  const Eigen::Map<const Eigen::VectorXd> weights(w.data(), m);

  StatisticSample out;
  out.kind = StatisticKind::kLimitFunctional;
  out.seed = seed;
  out.values.assign(R, 0.0);
  const std::size_t batches = (R + kBatch - 1) / kBatch;
  parallel_for(batches, threads, [&](std::size_t batch) {
    const std::size_t first = batch * kBatch;
    const std::size_t count = std::min(kBatch, R - first);
    Eigen::MatrixXd Z(m, static_cast<Eigen::Index>(count));
    for (std::size_t c = 0; c < count; ++c) {
      Rng rng(derive_seed(seed, streams::kLimitSampling, first + c));
      for (Eigen::Index i = 0; i < m; ++i) Z(i, static_cast<Eigen::Index>(c)) = rng.normal();
    }
    const Eigen::MatrixXd G = cg.factor * Z;
    for (std::size_t c = 0; c < count; ++c)
      out.values[first + c] = weights.dot(G.col(static_cast<Eigen::Index>(c)).cwiseAbs());
  });
  return out;
}

StatisticSample brownian_bridge_oracle(const DistributionModel& m, std::size_t R, std::size_t mesh,
                                       std::uint64_t seed, std::size_t threads) {
  if (R == 0) throw ValidationError("number of replicates must be positive");
  if (mesh == 0) throw ValidationError("mesh must be positive");
  const double h = 1.0 / static_cast<double>(mesh + 1);
  std::vector<double> u(mesh), w(mesh), mean_factor(mesh), sd(mesh);
  double prev = 0.0;
  for (std::size_t i = 0; i < mesh; ++i) {
    u[i] = static_cast<double>(i + 1) * h;
    w[i] = h * m.quantile_derivative(u[i]);
    if (!std::isfinite(w[i])) throw NumericalError("quantile derivative is not finite on the mesh");
    mean_factor[i] = (1.0 - u[i]) / (1.0 - prev);
    sd[i] = std::sqrt((u[i] - prev) * (1.0 - u[i]) / (1.0 - prev));
    prev = u[i];
  }

  StatisticSample out;
  out.kind = StatisticKind::kLimitFunctional;
  out.seed = seed;
  out.values.assign(R, 0.0);
  const std::size_t batches = (R + kBatch - 1) / kBatch;
  parallel_for(batches, threads, [&](std::size_t batch) {
    const std::size_t first = batch * kBatch;
    const std::size_t last = std::min(R, first + kBatch);
    for (std::size_t r = first; r < last; ++r) {
      Rng rng(derive_seed(seed, streams::kBridge, r));
      double b = 0.0;
      double acc = 0.0;
      for (std::size_t i = 0; i < mesh; ++i) {
        b = b * mean_factor[i] + sd[i] * rng.normal();
        acc += w[i] * std::abs(b);
      }
      out.values[r] = acc;
    }
  });
  return out;
}

}  // namespace wclt
