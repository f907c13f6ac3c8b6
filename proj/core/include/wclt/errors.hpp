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

#ifndef WCLT_ERRORS_HPP_
#define WCLT_ERRORS_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace wclt {

// Bad input: malformed samples, parameters out of range, inconsistent
// configuration. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not produce a trustworthy answer
// (factorization failure, quadrature that did not converge, resource
// limits). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A nonnegative quantity that may be +infinity. When infinite, the
// exponent of the power-law integrand responsible is kept as a
// diagnostic.
class ExtendedReal {
 public:
  static ExtendedReal finite(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ValidationError("ExtendedReal::finite requires a finite nonnegative value");
    }
    return ExtendedReal(value, std::nullopt);
  }

  // `exponent` is the decay exponent p of the integrand ~ t^{-p} that
  // made the integral diverge (p <= 1).
  static ExtendedReal infinity(double exponent, std::string reason = {}) {
    ExtendedReal r(std::numeric_limits<double>::infinity(), exponent);
    r.reason_ = std::move(reason);
    return r;
  }

  bool is_finite() const { return !divergence_exponent_.has_value(); }
  bool is_infinite() const { return divergence_exponent_.has_value(); }

  double value() const { return value_; }
  std::optional<double> divergence_exponent() const { return divergence_exponent_; }
  const std::string& reason() const { return reason_; }

  // Value, or throws NumericalError carrying the divergence diagnostic.
  double require_finite(const char* what) const;

 private:
  ExtendedReal(double v, std::optional<double> e) : value_(v), divergence_exponent_(e) {}

  double value_;
  std::optional<double> divergence_exponent_;
  std::string reason_;
};

inline double ExtendedReal::require_finite(const char* what) const {
  if (is_finite()) return value_;
  std::string msg = std::string(what) + " diverges (integrand exponent " +
                    std::to_string(*divergence_exponent_) + ")";
  if (!reason_.empty()) msg += ": " + reason_;
  throw NumericalError(msg);
}

}  // namespace wclt

#endif  // WCLT_ERRORS_HPP_
