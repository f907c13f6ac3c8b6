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

#include "wclt/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wclt/errors.hpp"

namespace wclt::quadrature {
namespace {

Result checked(double value, double error, const char* where) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string(where) + ": quadrature produced a non-finite value");
  }
  return {value, error};
}

}  // namespace

Result finite(const Integrand& f, double a, double b, double rel_tol) {
  if (!(a < b)) return {0.0, 0.0};
  static thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  double error = 0.0;
  double l1 = 0.0;
  const double v = rule.integrate(f, a, b, rel_tol, &error, &l1);
  return checked(v, error, "finite quadrature");
}

Result half_infinite(const Integrand& f, double a, double rel_tol) {
  static thread_local boost::math::quadrature::exp_sinh<double> rule(9);
  double error = 0.0;
  double l1 = 0.0;
  const double v = rule.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol, &error, &l1);
  return checked(v, error, "half-infinite quadrature");
}

Result piecewise(const Integrand& f, double a, double b, std::span<const double> breakpoints, double rel_tol) {
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > cuts.back() && p < b) cuts.push_back(p);
  }
  Result total;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto r = finite(f, cuts[k], cuts[k + 1], rel_tol);
    total.value += r.value;
    total.error += r.error;
  }
  if (std::isinf(b)) {
    auto r = half_infinite(f, cuts.back(), rel_tol);
    total.value += r.value;
    total.error += r.error;
  } else {
    auto r = finite(f, cuts.back(), b, rel_tol);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

}  // namespace wclt::quadrature
