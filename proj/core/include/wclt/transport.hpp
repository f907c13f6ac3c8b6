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

#ifndef WCLT_TRANSPORT_HPP_
#define WCLT_TRANSPORT_HPP_

#include <span>
#include <vector>

#include "wclt/distribution.hpp"
#include "wclt/errors.hpp"

namespace wclt {

// Ascending, finite, nonempty sample: the order statistics behind F_n.
class SortedSample {
 public:
  // Sorts a copy of `values`.
  explicit SortedSample(std::vector<double> values);
  // Takes ownership of values already in ascending order; throws otherwise.
  static SortedSample from_sorted(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  struct Presorted {};
  SortedSample(std::vector<double> values, Presorted);

  std::vector<double> values_;
};

// Integral of |F_x - F_y| over the real line, summed exactly over the
// merged breakpoints. Ties are allowed.
double w1_two_samples(const SortedSample& x, const SortedSample& y);

// (1/n) sum |x_(i) - y_(i)| for samples of equal size.
double w1_order_statistic_coupling(const SortedSample& x, const SortedSample& y);

// Integral of |F_n - F| for the empirical CDF of `s` against model `m`.
//
// Between consecutive order statistics F_n sits at level i/n and
// |i/n - F| changes sign at most once, at quantile(i/n). Each piece is a
// difference of closed-form CDF integrals, so the result is exact up to
// rounding for every model kind; the two unbounded end pieces use the
// model's closed-form tail integrals. `tail_tol` must be positive and
// bounds the additive error of those end pieces. Infinite when the model
// has infinite mean.
ExtendedReal w1_sample_vs_model(const SortedSample& s, const DistributionModel& m, double tail_tol = 1e-12);

// Integral over t >= 0 of sqrt(P(|X| > t)).
ExtendedReal lambda21(const DistributionModel& m);

// Integral over (0, alpha] of Q_{|Y|}(u) / sqrt(u), evaluated as
// 2 * integral over (0, sqrt(alpha)] of Q_{|Y|}(v^2).
ExtendedReal quantile_tail_integral(const DistributionModel& m, double alpha);

// Integral over t >= 0 of min(sqrt(alpha), sqrt(P(|Y| > t))). Equals
// quantile_tail_integral(m, alpha) / 2; computed along t instead of u.
ExtendedReal sqrt_tail_min_integral(const DistributionModel& m, double alpha);

}  // namespace wclt

#endif  // WCLT_TRANSPORT_HPP_
