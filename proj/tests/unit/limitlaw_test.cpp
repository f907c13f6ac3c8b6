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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "wclt/errors.hpp"
#include "wclt/limitlaw.hpp"
#include "wclt/processes.hpp"

using wclt::DistributionModel;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double gap = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    gap = std::max(gap, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return gap;
}

wclt::CovarianceGrid single_point(double variance) {
  wclt::CovarianceGrid cg;
  cg.grid = {0.0};
  cg.matrix = Eigen::MatrixXd::Constant(1, 1, variance);
  wclt::repair_and_factor(cg);
  return cg;
}

}  // namespace

TEST_CASE("quantile grid") {
  const DistributionModel u(wclt::Uniform{0, 1});
  const auto g = wclt::make_grid(u, 4);
  CHECK(g.points == std::vector<double>{0.0, 0.125, 0.375, 0.625, 0.875, 1.0});
  CHECK(g.tail_bias_bound == 0.0);
  const auto e = wclt::make_grid(DistributionModel(wclt::Exponential{1.0}), 32);
  CHECK(std::is_sorted(e.points.begin(), e.points.end()));
  CHECK(e.points.size() > 32);
  CHECK(e.tail_bias_bound < 1e-3);
  CHECK(std::isinf(wclt::make_grid(DistributionModel(wclt::ParetoTail{1, 2}), 16).tail_bias_bound));
  const auto w = wclt::trapezoid_weights(g.points);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("iid covariance examples") {
  const DistributionModel u(wclt::Uniform{0, 1});
  const std::vector<double> one{0.5};
  CHECK(wclt::covariance_iid(u, one).matrix(0, 0) == doctest::Approx(0.25));
  const std::vector<double> two{0.25, 0.75};
  const auto c = wclt::covariance_iid(u, two);
  CHECK(c.matrix(0, 0) == doctest::Approx(0.1875));
  CHECK(c.matrix(0, 1) == doctest::Approx(0.0625));
  CHECK(c.matrix(1, 0) == doctest::Approx(0.0625));
  CHECK(c.matrix(1, 1) == doctest::Approx(0.1875));
  CHECK(c.source == wclt::CovarianceSource::kAnalyticIid);
  const std::vector<double> edge{-1.0, 0.5};
  const auto z = wclt::covariance_iid(u, edge);
  CHECK(z.matrix.row(0).isZero(0.0));
  CHECK(z.matrix.col(0).isZero(0.0));
}

TEST_CASE("iid covariance needs no repair on fine grids") {
  const DistributionModel u(wclt::Uniform{0, 1});
  const auto g = wclt::make_grid(u, 512);
  const auto c = wclt::covariance_iid(u, g.points);
  CHECK(c.psd_repair.jitter_added == 0.0);
  CHECK(c.psd_repair.eigenvalues_clipped == 0);
  CHECK((c.matrix - c.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((c.factor * c.factor.transpose() - c.matrix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dependent covariance reduces to the iid one") {
  const DistributionModel u(wclt::Uniform{0, 1});
  const wclt::IidProcess iid{u};
  const auto grid = wclt::make_grid(u, 16).points;
  const auto exact = wclt::covariance_iid(u, grid);

  SUBCASE("K = 5 at length 1e6") {
    const auto c = wclt::covariance_dependent(iid, grid, 5, 1000000, 17);
    CHECK(c.source == wclt::CovarianceSource::kSimulatedDependent);
    CHECK(c.lag_cutoff == 5);
    CHECK((c.matrix - exact.matrix).cwiseAbs().maxCoeff() < 5e-3);
  }
  SUBCASE("K = 0 is the empirical iid covariance") {
    const std::size_t L = 100000;
    const auto c = wclt::covariance_dependent(iid, grid, 0, L, 23);
    const auto path = wclt::generate(iid, L, 23);
    std::vector<double> F(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      F[i] = static_cast<double>(std::count_if(path.values.begin(), path.values.end(),
                                               [&](double y) { return y <= grid[i]; })) /
             static_cast<double>(L);
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(c.matrix(i, j) == doctest::Approx(F[std::min(i, j)] - F[i] * F[j]).epsilon(1e-9).scale(1e-12));
  }
  SUBCASE("too many lags") {
    CHECK_THROWS_AS(wclt::covariance_dependent(iid, grid, 100, 1000, 1), wclt::ValidationError);
  }
}

TEST_CASE("doubling-map covariance is PSD after repair") {
  const DistributionModel ref(wclt::ParetoTail{1.0, 4.0});
  const auto grid = wclt::make_grid(ref, 64, wclt::GridScheme::kQuantile, 1e-3, 0).points;
  const auto c = wclt::covariance_dependent(wclt::DoublingMapProcess{0.25, 1000}, grid, 40, 1000000, 5);
  const double trace = c.matrix.trace();
  MESSAGE("jitter " << c.psd_repair.jitter_added << " clipped " << c.psd_repair.eigenvalues_clipped
                    << " min eigenvalue " << c.psd_repair.min_eigenvalue);
  CHECK(c.psd_repair.jitter_added <= 1e-8 * trace);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.matrix);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * trace);
  CHECK((c.matrix.diagonal().array() >= 0.0).all());
}

TEST_CASE("lag cutoff from the mixing bound") {
  CHECK(wclt::lag_cutoff_for(wclt::MixingBound(wclt::PhiGeometric{1.0, 0.5})) == 10);
  // sum_{k > K} (k + 1)^{-3} < 1e-3 via the integral bound (K + 1)^{-2} / 2
  CHECK(wclt::lag_cutoff_for(wclt::MixingBound(wclt::AlphaPolynomial{1.0, 0.25})) == 22);
  CHECK_THROWS_AS(wclt::lag_cutoff_for(wclt::MixingBound(wclt::ConstantMixing{0.5})), wclt::ValidationError);
}

TEST_CASE("degenerate and one-point Gaussian functionals") {
  const auto zero = wclt::sample_limit_functional(single_point(0.0), 100, 1);
  for (double v : zero.values) CHECK(v == 0.0);
  const auto hn = wclt::sample_limit_functional(single_point(1.0), 200000, 2);
  CHECK(hn.kind == wclt::StatisticKind::kLimitFunctional);
  CHECK(mean(hn.values) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(5e-3));
  CHECK(std::sqrt(2.0 / std::numbers::pi) == doctest::Approx(0.797885).epsilon(1e-6));
}

TEST_CASE("uniform limit functional has mean sqrt(2 pi) / 8") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double quarter_circle = ts.integrate([](double u) { return std::sqrt(u * (1.0 - u)); }, 0.0, 1.0);
  CHECK(quarter_circle == doctest::Approx(std::numbers::pi / 8.0).epsilon(1e-12));
  const double target = std::sqrt(2.0 / std::numbers::pi) * quarter_circle;
  CHECK(target == doctest::Approx(0.313329).epsilon(1e-5));

  const DistributionModel u(wclt::Uniform{0, 1});
  const auto cg = wclt::covariance_iid(u, wclt::make_grid(u, 512).points);
  const auto s = wclt::sample_limit_functional(cg, 100000, 31);
  CHECK(std::abs(mean(s.values) - target) < 3e-3);
  for (double v : s.values) REQUIRE(v >= 0.0);
}

TEST_CASE("Brownian bridge oracle") {
  const DistributionModel u(wclt::Uniform{0, 1});
  const auto one = wclt::brownian_bridge_oracle(u, 200000, 1, 3);
  // weight 1/2 times E|B(1/2)| = sqrt(1 / (2 pi))
  CHECK(mean(one.values) == doctest::Approx(0.5 * std::sqrt(1.0 / (2.0 * std::numbers::pi))).epsilon(5e-3));
  const auto fine = wclt::brownian_bridge_oracle(u, 20000, 512, 4);
  CHECK(std::abs(mean(fine.values) - std::sqrt(2.0 * std::numbers::pi) / 8.0) < 5e-3);
  const DistributionModel step(wclt::Tabulated{{0.0, 1.0}, {0.5, 1.0}, wclt::Interpolation::kStep});
  CHECK_THROWS_AS(wclt::brownian_bridge_oracle(step, 10, 8, 1), wclt::ValidationError);
}

TEST_CASE("limit functional is stable under grid refinement") {
  const DistributionModel u(wclt::Uniform{0, 1});
  const auto a = wclt::sample_limit_functional(wclt::covariance_iid(u, wclt::make_grid(u, 256).points), 10000, 7);
  const auto b = wclt::sample_limit_functional(wclt::covariance_iid(u, wclt::make_grid(u, 512).points), 10000, 8);
  CHECK(ks(a.values, b.values) < 0.02);
}

TEST_CASE("scaling the covariance scales every replicate") {
  const DistributionModel e(wclt::Exponential{1.0});
  auto cg = wclt::covariance_iid(e, wclt::make_grid(e, 64).points);
  const auto base = wclt::sample_limit_functional(cg, 1000, 9);
  cg.matrix *= 4.0;
  cg.factor *= 2.0;
  const auto scaled = wclt::sample_limit_functional(cg, 1000, 9);
  for (std::size_t r = 0; r < base.values.size(); ++r) CHECK(scaled.values[r] == 2.0 * base.values[r]);

  wclt::repair_and_factor(cg);
  const auto refactored = wclt::sample_limit_functional(cg, 1000, 9);
  for (std::size_t r = 0; r < base.values.size(); ++r)
    CHECK(refactored.values[r] == doctest::Approx(2.0 * base.values[r]).epsilon(1e-9));
}

TEST_CASE("limit sampling does not depend on the thread count") {
  const DistributionModel u(wclt::Uniform{0, 1});
  const auto cg = wclt::covariance_iid(u, wclt::make_grid(u, 128).points);
  const auto a = wclt::sample_limit_functional(cg, 3000, 12, 1);
  const auto b = wclt::sample_limit_functional(cg, 3000, 12, 4);
  CHECK(a.values == b.values);
  const auto c = wclt::brownian_bridge_oracle(u, 3000, 64, 12, 1);
  const auto d = wclt::brownian_bridge_oracle(u, 3000, 64, 12, 3);
  CHECK(c.values == d.values);
}
