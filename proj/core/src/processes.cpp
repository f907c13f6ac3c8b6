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

#include "wclt/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wclt/errors.hpp"

namespace wclt {
namespace {

constexpr double kStateFloor = 0x1.0p-53;
constexpr double kStateCeil = 1.0 - 0x1.0p-53;
constexpr double kDefaultTruncationTol = 1e-8;
constexpr std::size_t kMaxTruncation = 10'000'000;
constexpr double kMaxLinearWork = 4e9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* msg) {
  if (!ok) throw ValidationError(msg);
}

// Nodes for tabulating a law on (0, 1]: 16 per decade on [1e-15, 1e-2],
// then uniform with spacing 1/1024 up to 1.
std::vector<double> map_state_nodes() {
  std::vector<double> nodes;
  for (int k = 0; k < 13 * 16; ++k) nodes.push_back(std::pow(10.0, -15.0 + k / 16.0));
  for (int k = 11; k <= 1024; ++k) nodes.push_back(k / 1024.0);
  return nodes;
}

}  // namespace

// ----------------------------------------------------------- CoeffFamily

CoeffFamily::CoeffFamily(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const GeometricCoefficients& g) {
                   require(g.rho >= 0.0 && g.rho < 1.0, "geometric coefficients need rho in [0, 1)");
                   require(std::isfinite(g.scale) && g.scale != 0.0, "coefficient a_0 must be nonzero");
                 },
                 [](const PolynomialCoefficients& p) {
                   require(std::isfinite(p.beta) && p.beta > 1.0, "polynomial coefficients need beta > 1");
                   require(std::isfinite(p.offset) && p.offset > 0.0, "polynomial coefficients need offset > 0");
                   require(std::isfinite(p.scale) && p.scale != 0.0, "coefficient a_0 must be nonzero");
                 },
             },
             kind_);
}

double CoeffFamily::operator()(std::size_t j) const {
  const double dj = static_cast<double>(j);
  return std::visit(overloaded{
                        [&](const GeometricCoefficients& g) { return j == 0 ? g.scale : g.scale * std::pow(g.rho, dj); },
                        [&](const PolynomialCoefficients& p) { return p.scale * std::pow(dj + p.offset, -p.beta); },
                    },
                    kind_);
}

double CoeffFamily::abs_tail_bound(std::size_t J) const {
  const double dj = static_cast<double>(J);
  return std::visit(overloaded{
                        [&](const GeometricCoefficients& g) {
                          return std::abs(g.scale) * std::pow(g.rho, dj + 1.0) / (1.0 - g.rho);
                        },
                        [&](const PolynomialCoefficients& p) {
                          // sum_{j > J} (j + o)^{-b} <= integral_J^inf (x + o)^{-b} dx
                          return std::abs(p.scale) * std::pow(dj + p.offset, 1.0 - p.beta) / (p.beta - 1.0);
                        },
                    },
                    kind_);
}

double CoeffFamily::abs_sum() const {
  return std::visit(overloaded{
                        [](const GeometricCoefficients& g) { return std::abs(g.scale) / (1.0 - g.rho); },
                        [](const PolynomialCoefficients& p) {
                          // Hurwitz zeta by Euler-Maclaurin after N explicit terms
                          constexpr int kTerms = 1000;
                          double s = 0.0;
                          for (int j = kTerms - 1; j >= 0; --j) s += std::pow(j + p.offset, -p.beta);
                          const double x = kTerms + p.offset;
                          s += std::pow(x, 1.0 - p.beta) / (p.beta - 1.0) + 0.5 * std::pow(x, -p.beta) +
                               p.beta / 12.0 * std::pow(x, -p.beta - 1.0);
                          return std::abs(p.scale) * s;
                        },
                    },
                    kind_);
}

std::size_t CoeffFamily::truncation_for(double tol) const {
  require(tol > 0.0, "truncation tolerance must be positive");
  const double guess = std::visit(
      overloaded{
          [&](const GeometricCoefficients& g) {
            if (g.rho == 0.0) return 1.0;
            return std::ceil(std::log(tol * (1.0 - g.rho) / std::abs(g.scale)) / std::log(g.rho)) - 1.0;
          },
          [&](const PolynomialCoefficients& p) {
            return std::ceil(std::pow(tol * (p.beta - 1.0) / std::abs(p.scale), 1.0 / (1.0 - p.beta)) - p.offset);
          },
      },
      kind_);
  if (!(guess < static_cast<double>(kMaxTruncation))) {
    throw NumericalError("coefficient tail decays too slowly: truncation beyond " + std::to_string(kMaxTruncation) +
                         " terms; set the truncation explicitly");
  }
  auto J = static_cast<std::size_t>(std::max(1.0, guess));
  while (J > 1 && abs_tail_bound(J - 1) < tol) --J;
  while (abs_tail_bound(J) >= tol) ++J;
  return J;
}

// ------------------------------------------------------------ processes

void validate(const ProcessSpec& spec) {
  std::visit(overloaded{
                 [](const IidProcess&) {},
                 [](const IntermittentMapProcess& p) {
                   require(p.gamma > 0.0 && p.gamma < 1.0, "intermittent map needs gamma in (0, 1)");
                   require(p.observable_exponent > 0.0 && std::isfinite(p.observable_exponent),
                           "observable exponent a must be > 0");
                 },
                 [](const DoublingMapProcess& p) {
                   require(p.observable_exponent > 0.0 && std::isfinite(p.observable_exponent),
                           "observable exponent a must be > 0");
                 },
                 [](const CausalLinearProcess&) {},
             },
             spec);
}

std::size_t effective_truncation(const CausalLinearProcess& p) {
  return p.truncation > 0 ? p.truncation : p.coefficients.truncation_for(kDefaultTruncationTol);
}

double intermittent_step(double x, double gamma) {
  if (!(x > 0.0 && x < 1.0)) throw ValidationError("intermittent_step: x must lie in (0, 1)");
  const double y = x < 0.5 ? x * (1.0 + std::pow(2.0 * x, gamma)) : 2.0 * x - 1.0;
  return std::clamp(y, kStateFloor, kStateCeil);
}

ProcessStream::ProcessStream(const ProcessSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {
  validate(spec_);
  std::visit(overloaded{
                 [](const IidProcess&) {},
                 [this](const IntermittentMapProcess& p) {
                   x_ = rng_.uniform();
                   for (std::size_t k = 0; k < p.burn_in; ++k) advance_map();
                 },
                 [this](const DoublingMapProcess& p) {
                   words_ = {rng_.bits(), rng_.bits()};
                   x_ = doubling_state();
                   for (std::size_t k = 0; k < p.burn_in; ++k) advance_map();
                 },
                 [this](const CausalLinearProcess& p) {
                   const std::size_t J = effective_truncation(p);
                   coeffs_.resize(J + 1);
                   for (std::size_t j = 0; j <= J; ++j) coeffs_[j] = p.coefficients(j);
                   ring_.resize(J + 1);
                   // innovations eps_{-J}, ..., eps_{-1}; slot J is filled on the first next()
                   for (std::size_t j = 0; j < J; ++j) ring_[j] = p.innovation.quantile(rng_.uniform());
                   head_ = J == 0 ? 0 : J - 1;
                 },
             },
             spec_);
}

double ProcessStream::doubling_state() const {
  const double x = static_cast<double>(words_[0]) * 0x1.0p-64 + static_cast<double>(words_[1]) * 0x1.0p-128;
  return std::clamp(x, 0x1.0p-128, kStateCeil);
}

void ProcessStream::advance_map() {
  if (const auto* p = std::get_if<IntermittentMapProcess>(&spec_)) {
    // 1/2 maps onto the neutral fixed point 0, which would freeze the orbit
    while (x_ == 0.5) {
      x_ = rng_.uniform();
      ++reseeded_;
    }
    x_ = intermittent_step(x_, p->gamma);
    return;
  }
  // Doubling map as a shift on the binary expansion. Bits below the
  // 128-bit window are fresh fair coins, which is exactly the law of the
  // expansion of a Lebesgue-distributed point.
  if (refill_bits_ == 0) {
    refill_ = rng_.bits();
    refill_bits_ = 64;
  }
  const std::uint64_t bit = refill_ >> 63;
  refill_ <<= 1;
  --refill_bits_;
  words_[0] = (words_[0] << 1) | (words_[1] >> 63);
  words_[1] = (words_[1] << 1) | bit;
  x_ = doubling_state();
}

double ProcessStream::next() {
  return std::visit(overloaded{
                        [this](const IidProcess& p) { return p.model.quantile(rng_.uniform()); },
                        [this](const IntermittentMapProcess& p) {
                          advance_map();
                          return std::pow(x_, -p.observable_exponent);
                        },
                        [this](const DoublingMapProcess& p) {
                          advance_map();
                          return std::pow(x_, -p.observable_exponent);
                        },
                        [this](const CausalLinearProcess& p) {
                          const std::size_t width = ring_.size();
                          head_ = (head_ + 1) % width;
                          ring_[head_] = p.innovation.quantile(rng_.uniform());
                          double y = 0.0;
                          for (std::size_t j = 0; j < width; ++j) {
                            y += coeffs_[j] * ring_[(head_ + width - j) % width];
                          }
                          return y;
                        },
                    },
                    spec_);
}

Path generate(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "generate: n must be >= 1");
  double bound = 0.0;
  if (const auto* p = std::get_if<CausalLinearProcess>(&spec)) {
    const std::size_t J = effective_truncation(*p);
    if (static_cast<double>(n) * static_cast<double>(J + 1) > kMaxLinearWork) {
      throw NumericalError("generate: n * J exceeds the work limit");
    }
    bound = p->coefficients.abs_tail_bound(J) * p->innovation.abs_mean().require_finite("innovation E|eps|");
  }
  ProcessStream stream(spec, seed);
  std::vector<double> values(n);
  for (auto& v : values) v = stream.next();
  return Path{std::move(values), spec, seed, bound, stream.reseeded_states()};
}

std::vector<double> generate_orbit(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
  require(std::holds_alternative<IntermittentMapProcess>(spec) || std::holds_alternative<DoublingMapProcess>(spec),
          "generate_orbit: map process required");
  ProcessStream stream(spec, seed);
  std::vector<double> orbit(n);
  for (auto& x : orbit) {
    stream.next();
    x = stream.state();
  }
  return orbit;
}

DistributionModel calibrate_reference_cdf(const ProcessSpec& spec, std::size_t length, std::span<const double> grid,
                                          std::uint64_t seed) {
  require(length >= 1, "calibration length must be >= 1");
  require(!grid.empty(), "calibration grid must be nonempty");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    require(grid[k] > grid[k - 1], "calibration grid must be strictly increasing");
  }
  std::vector<std::size_t> counts(grid.size() + 1, 0);
  ProcessStream stream(spec, seed);
  for (std::size_t i = 0; i < length; ++i) {
    const double y = stream.next();
    auto it = std::lower_bound(grid.begin(), grid.end(), y);
    ++counts[static_cast<std::size_t>(std::distance(grid.begin(), it))];
  }
  Tabulated tb;
  tb.grid.assign(grid.begin(), grid.end());
  tb.cdf.resize(grid.size());
  std::size_t cum = 0;
  double running = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    cum += counts[k];
    running = std::max(running, static_cast<double>(cum) / static_cast<double>(length));
    tb.cdf[k] = running;
  }
  return DistributionModel(std::move(tb));
}

DistributionModel calibrate_map_reference(const ProcessSpec& spec, std::size_t length, std::uint64_t seed,
                                          std::size_t min_origin_count) {
  double a = 0.0;
  double kappa = 1.0;
  if (const auto* p = std::get_if<IntermittentMapProcess>(&spec)) {
    a = p->observable_exponent;
    kappa = 1.0 - p->gamma;
  } else if (const auto* p = std::get_if<DoublingMapProcess>(&spec)) {
    a = p->observable_exponent;
  } else {
    throw ValidationError("calibrate_map_reference: map process required");
  }
  require(length >= 10 * min_origin_count, "calibration orbit too short for the requested origin count");

  const std::vector<double> nodes = map_state_nodes();
  std::vector<std::size_t> counts(nodes.size() + 1, 0);
  ProcessStream stream(spec, seed);
  for (std::size_t i = 0; i < length; ++i) {
    stream.next();
    auto it = std::lower_bound(nodes.begin(), nodes.end(), stream.state());
    ++counts[static_cast<std::size_t>(std::distance(nodes.begin(), it))];
  }
  TabulatedBase base;
  base.origin_exponent = kappa;
  std::size_t cum = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    cum += counts[k];
    if (base.grid.empty() && cum < min_origin_count && k + 1 < nodes.size()) continue;
    base.grid.push_back(nodes[k]);
    base.cdf.push_back(static_cast<double>(cum) / static_cast<double>(length));
  }
  base.cdf.back() = 1.0;
  return DistributionModel(PowerPushforward{a, std::move(base)});
}

}  // namespace wclt
