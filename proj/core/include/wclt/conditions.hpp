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

#ifndef WCLT_CONDITIONS_HPP_
#define WCLT_CONDITIONS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wclt/distribution.hpp"
#include "wclt/errors.hpp"
#include "wclt/processes.hpp"

namespace wclt {

// phi(k) <= c1 * rho^k
struct PhiGeometric {
  double c1 = 1.0;
  double rho = 0.5;
};

// alpha(k) <= c_gamma / (k + 1)^{(1 - gamma) / gamma}
struct AlphaPolynomial {
  double c_gamma = 1.0;
  double gamma = 0.25;
};

// No decay at all: coefficient(k) = value for every k.
struct ConstantMixing {
  double value = 1.0;
};

// Decay bound k -> coefficient(k) on a dependence coefficient. Values are
// clamped to [0, 1]; the unclamped form is what the tail bounds use.
class MixingBound {
 public:
  using Kind = std::variant<PhiGeometric, AlphaPolynomial, ConstantMixing>;

  explicit MixingBound(Kind kind);

  const Kind& kind() const { return kind_; }
  double operator()(std::size_t k) const;
  double unclamped(std::size_t k) const;
  // Number of k in [0, horizon) where the raw bound exceeded 1.
  std::size_t clamped_terms(std::size_t horizon) const;
  std::string name() const;

 private:
  Kind kind_;
};

enum class Verdict { kConverges, kDiverges, kUndetermined };

const char* to_string(Verdict v);

struct ConditionReport {
  Verdict verdict = Verdict::kUndetermined;
  double partial_sum = 0.0;
  std::size_t terms_used = 0;
  std::optional<double> tail_bound;
  std::string notes;
  // Decay exponent e of the k-th term (~ k^e), when the check is an
  // exponent comparison against -1.
  std::optional<double> term_exponent;
  // Named sub-verdicts that the overall verdict combines.
  std::vector<std::pair<std::string, Verdict>> components;
};

// Band around a critical exponent inside which verdicts are undetermined.
inline constexpr double kCriticalExponentTolerance = 1e-9;

// sum_k sqrt(phi(k) / k) < inf together with a finite Lambda_{2,1}(m).
// With terms == 0 the partial sum is extended until the geometric tail
// bound is below 1e-10 of it.
ConditionReport check_phi_condition(const MixingBound& b, const DistributionModel& m, std::size_t terms = 0);

// sum_k k^{-1/2} * quantile_tail_integral(m, alpha(k)) < inf.
ConditionReport check_alpha_condition(const MixingBound& b, const DistributionModel& m, std::size_t terms = 1000);

// (integral of min(sqrt(alpha(k)), sqrt(P(|Y| > t))) dt,
//  quantile_tail_integral(m, alpha(k)) / 2). The two agree.
std::pair<ExtendedReal, ExtendedReal> alpha_forms_pair(const MixingBound& b, const DistributionModel& m, std::size_t k);

// Converges iff a < 1/2 - gamma for the observable x^{-a} of the
// intermittent map; undetermined at equality.
ConditionReport check_intermittent_threshold(double gamma, double a, std::size_t terms = 1000);

enum class LinearMode {
  kExact,   // sum_k int_0^{a_k^2} Q_{|Y_0|}(u) / sqrt(u) du
  kRio,     // same with Q_{|eps_0|}
  kMoment,  // sum_k k^{1/(r-1)} |a_k|^{(r-2)/(r-1)}, eps in L^r
  kTail,    // sum_k |a_k|^{1-2/r}, P(|eps| > x) <= (c/x)^r
};

const char* to_string(LinearMode mode);
LinearMode linear_mode_from_string(const std::string& name);

struct LinearCheckOptions {
  std::optional<double> moment_r;                // required by kMoment / kTail
  std::optional<DistributionModel> marginal;     // required by kExact
  std::size_t terms = 1000;
};

ConditionReport check_linear_conditions(const CoeffFamily& f, const DistributionModel& innovation, LinearMode mode,
                                        const LinearCheckOptions& options = {});

}  // namespace wclt

#endif  // WCLT_CONDITIONS_HPP_
