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

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "wclt/conditions.hpp"
#include "wclt/errors.hpp"

using wclt::DistributionModel;
using wclt::MixingBound;
using wclt::Verdict;

TEST_CASE("mixing bounds are clamped and nonincreasing") {
  const MixingBound a(wclt::AlphaPolynomial{4.0, 0.25});
  CHECK(a.unclamped(0) == doctest::Approx(4.0));
  CHECK(a(0) == 1.0);
  CHECK(a(3) == doctest::Approx(4.0 / 64.0));
  CHECK(a.clamped_terms(10) == 1);
  double prev = 1.0;
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(a(k) <= prev);
    prev = a(k);
  }
  CHECK_THROWS_AS(MixingBound(wclt::PhiGeometric{1.0, 1.0}), wclt::ValidationError);
  CHECK_THROWS_AS(MixingBound(wclt::AlphaPolynomial{0.0, 0.25}), wclt::ValidationError);
}

TEST_CASE("phi condition") {
  const DistributionModel u(wclt::Uniform{0, 1});
  SUBCASE("geometric with a bounded marginal converges") {
    const auto r = wclt::check_phi_condition(MixingBound(wclt::PhiGeometric{1.0, 0.5}), u, 200);
    CHECK(r.verdict == Verdict::kConverges);
    CHECK(r.terms_used == 200);
    REQUIRE(r.tail_bound.has_value());
    CHECK(*r.tail_bound < 1e-20);
    double direct = 0.0;
    for (int k = 1; k <= 200; ++k) direct += std::sqrt(std::pow(0.5, k) / k);
    CHECK(r.partial_sum == doctest::Approx(direct).epsilon(1e-12));
  }
  SUBCASE("a Pareto(2) marginal has infinite Lambda_{2,1}") {
    const auto r =
        wclt::check_phi_condition(MixingBound(wclt::PhiGeometric{1.0, 0.5}), DistributionModel(wclt::ParetoTail{1, 2}));
    CHECK(r.verdict == Verdict::kDiverges);
    REQUIRE(r.components.size() == 2);
    CHECK(r.components[0].second == Verdict::kConverges);
    CHECK(r.components[1].second == Verdict::kDiverges);
  }
  SUBCASE("rho close to one still converges") {
    const auto r = wclt::check_phi_condition(MixingBound(wclt::PhiGeometric{1.0, 0.999}), u);
    CHECK(r.verdict == Verdict::kConverges);
    REQUIRE(r.tail_bound.has_value());
    double brute = 0.0;
    for (int k = 1; k <= 1000000; ++k) brute += std::sqrt(std::pow(0.999, k) / k);
    const double total = r.partial_sum + *r.tail_bound;
    CHECK(std::abs(total - brute) / brute < 1e-3);
    CHECK(r.partial_sum <= brute * (1.0 + 1e-12));
  }
}

TEST_CASE("alpha condition") {
  const DistributionModel u(wclt::Uniform{0, 1});
  SUBCASE("no mixing diverges") {
    const auto r = wclt::check_alpha_condition(MixingBound(wclt::ConstantMixing{1.0}), u, 1000);
    CHECK(r.verdict == Verdict::kDiverges);
    REQUIRE(r.term_exponent.has_value());
    CHECK(*r.term_exponent == doctest::Approx(-0.5));
  }
  SUBCASE("intermittent example converges") {
    // gamma = 0.25, a = 0.2: marginal tail index (1 - gamma) / a = 3.75
    const auto r = wclt::check_alpha_condition(MixingBound(wclt::AlphaPolynomial{1.0, 0.25}),
                                               DistributionModel(wclt::ParetoTail{1.0, 3.75}), 1000);
    CHECK(r.verdict == Verdict::kConverges);
    CHECK(r.tail_bound.has_value());
  }
  SUBCASE("partial sums match term-by-term quadrature") {
    boost::math::quadrature::tanh_sinh<double> ts;
    const MixingBound b(wclt::AlphaPolynomial{1.0, 0.25});
    const auto r = wclt::check_alpha_condition(b, u, 1000);
    double oracle = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      const double lim = std::pow(k + 1.0, -3.0);
      // Q_{|Y|}(u) = 1 - u for Uniform(0, 1); substitute u = s^2
      oracle += ts.integrate([](double s) { return 2.0 * (1.0 - s * s); }, 0.0, std::sqrt(lim)) / std::sqrt(k);
    }
    CHECK(r.partial_sum == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(r.verdict == Verdict::kConverges);
    REQUIRE(r.term_exponent.has_value());
    CHECK(*r.term_exponent == doctest::Approx(-0.5 - 3.0 * 0.5));
  }
  SUBCASE("too few terms") {
    CHECK_THROWS_AS(wclt::check_alpha_condition(MixingBound(wclt::AlphaPolynomial{1.0, 0.25}), u, 5),
                    wclt::ValidationError);
  }
}

TEST_CASE("partial sums are monotone in the number of terms") {
  const MixingBound b(wclt::AlphaPolynomial{1.0, 0.3});
  const DistributionModel m(wclt::ParetoTail{1.0, 4.0});
  double prev = 0.0;
  for (std::size_t terms : {10, 50, 100, 500, 2000}) {
    const auto r = wclt::check_alpha_condition(b, m, terms);
    CHECK(r.partial_sum >= prev);
    CHECK(r.verdict == Verdict::kConverges);
    prev = r.partial_sum;
  }
}

TEST_CASE("the two forms of the alpha integral agree") {
  const DistributionModel u(wclt::Uniform{0, 1});
  auto [l, r] = wclt::alpha_forms_pair(MixingBound(wclt::ConstantMixing{0.25}), u, 1);
  CHECK(l.value() == doctest::Approx(0.458333333333333).epsilon(1e-12));
  CHECK(r.value() == doctest::Approx(0.458333333333333).epsilon(1e-12));

  // alpha = 1: (1/2) int_0^1 (1 - u) / sqrt(u) du = 2/3
  auto [l1, r1] = wclt::alpha_forms_pair(MixingBound(wclt::ConstantMixing{1.0}), u, 5);
  CHECK(l1.value() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(r1.value() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  auto [lp, rp] = wclt::alpha_forms_pair(MixingBound(wclt::ConstantMixing{0.1}), DistributionModel(wclt::ParetoTail{1, 4}), 1);
  CHECK(std::abs(lp.value() - rp.value()) <= 1e-6 * rp.value());

  const std::vector<DistributionModel> models{u, DistributionModel(wclt::Exponential{2.0}),
                                              DistributionModel(wclt::ParetoTail{1, 3}),
                                              DistributionModel(wclt::ParetoTail{0.5, 6})};
  const MixingBound b(wclt::AlphaPolynomial{1.0, 0.4});
  for (const auto& m : models) {
    for (std::size_t k : {1, 2, 10, 100, 10000}) {
      auto [a, c] = wclt::alpha_forms_pair(b, m, k);
      CHECK(std::abs(a.value() - c.value()) <= 1e-6 * (1.0 + c.value()));
    }
  }
  CHECK_THROWS_AS(wclt::alpha_forms_pair(b, u, 0), wclt::ValidationError);
}

TEST_CASE("intermittent threshold") {
  CHECK(wclt::check_intermittent_threshold(0.25, 0.2).verdict == Verdict::kConverges);
  CHECK(wclt::check_intermittent_threshold(0.25, 0.3).verdict == Verdict::kDiverges);
  CHECK(wclt::check_intermittent_threshold(0.25, 0.25).verdict == Verdict::kUndetermined);
  CHECK_THROWS_AS(wclt::check_intermittent_threshold(0.0, 0.2), wclt::ValidationError);
  CHECK_THROWS_AS(wclt::check_intermittent_threshold(0.25, 0.0), wclt::ValidationError);
}

TEST_CASE("alpha check on the induced Pareto marginal agrees with the threshold") {
  for (double gamma = 0.05; gamma < 0.5; gamma += 0.05) {
    for (double a = 0.02; a < 0.9; a += 0.04) {
      if (std::abs(a - (0.5 - gamma)) < 1e-3) continue;
      CAPTURE(gamma);
      CAPTURE(a);
      const DistributionModel m(wclt::ParetoTail{1.0, (1.0 - gamma) / a});
      const auto alpha = wclt::check_alpha_condition(MixingBound(wclt::AlphaPolynomial{1.0, gamma}), m, 100);
      CHECK(alpha.verdict == wclt::check_intermittent_threshold(gamma, a).verdict);
    }
  }
}

TEST_CASE("linear process conditions") {
  const DistributionModel eps(wclt::Uniform{-1, 1});
  wclt::LinearCheckOptions opt;
  opt.moment_r = 4.0;
  auto r = wclt::check_linear_conditions(wclt::CoeffFamily(wclt::GeometricCoefficients{0.5, 1.0}), eps,
                                         wclt::LinearMode::kTail, opt);
  CHECK(r.verdict == Verdict::kConverges);
  // sum_k 0.5^{k/2}
  CHECK(r.partial_sum + *r.tail_bound >= 1.0 / (1.0 - std::sqrt(0.5)) - 1e-9);

  opt.moment_r = 3.0;
  r = wclt::check_linear_conditions(wclt::CoeffFamily(wclt::PolynomialCoefficients{4.0, 1.0, 1.0}), eps,
                                    wclt::LinearMode::kMoment, opt);
  CHECK(r.verdict == Verdict::kConverges);
  CHECK(*r.term_exponent == doctest::Approx(-1.5));

  r = wclt::check_linear_conditions(wclt::CoeffFamily(wclt::PolynomialCoefficients{1.1, 1.0, 1.0}), eps,
                                    wclt::LinearMode::kTail, opt);
  CHECK(r.verdict == Verdict::kDiverges);
  CHECK(*r.term_exponent == doctest::Approx(-1.1 / 3.0));

  r = wclt::check_linear_conditions(wclt::CoeffFamily(wclt::GeometricCoefficients{0.5, 1.0}), eps,
                                    wclt::LinearMode::kRio, opt);
  CHECK(r.verdict == Verdict::kConverges);

  opt.moment_r = 2.0;
  CHECK_THROWS_AS(wclt::check_linear_conditions(wclt::CoeffFamily(wclt::GeometricCoefficients{0.5, 1.0}), eps,
                                                wclt::LinearMode::kMoment, opt),
                  wclt::ValidationError);
  CHECK_THROWS_AS(wclt::check_linear_conditions(wclt::CoeffFamily(wclt::GeometricCoefficients{0.5, 1.0}), eps,
                                                wclt::LinearMode::kExact, {}),
                  wclt::ValidationError);
}
