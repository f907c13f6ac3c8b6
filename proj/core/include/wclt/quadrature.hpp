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

#ifndef WCLT_QUADRATURE_HPP_
#define WCLT_QUADRATURE_HPP_

#include <functional>
#include <span>

namespace wclt::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

using Integrand = std::function<double(double)>;

// Double-exponential rules; both tolerate integrable endpoint
// singularities. Throws NumericalError when the estimate is not finite.
Result finite(const Integrand& f, double a, double b, double rel_tol = 1e-10);
Result half_infinite(const Integrand& f, double a, double rel_tol = 1e-10);

// Sum of finite() over the pieces [a, p_1], [p_1, p_2], ..., [p_k, b] for
// the breakpoints strictly inside (a, b); b may be +infinity.
Result piecewise(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 double rel_tol = 1e-10);

}  // namespace wclt::quadrature

#endif  // WCLT_QUADRATURE_HPP_
