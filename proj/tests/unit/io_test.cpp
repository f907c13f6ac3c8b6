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

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "wclt/errors.hpp"
#include "wclt/io.hpp"

using nlohmann::json;
using wclt::DistributionModel;

TEST_CASE("format_double is round-trip exact") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5}) {
    CHECK(std::stod(wclt::io::format_double(v)) == v);
  }
}

TEST_CASE("models round-trip through JSON") {
  const std::vector<DistributionModel> models{
      DistributionModel(wclt::Uniform{-1, 2}),
      DistributionModel(wclt::Exponential{0.5}),
      DistributionModel(wclt::ParetoTail{2.0, 3.5}),
      DistributionModel(wclt::PowerPushforward{0.25, std::nullopt}),
      DistributionModel(wclt::PowerPushforward{0.2, wclt::TabulatedBase{{0.01, 1.0}, {0.02, 1.0}, 0.75}}),
      DistributionModel(wclt::Tabulated{{0.0, 1.0, 2.0}, {0.2, 0.5, 1.0}, wclt::Interpolation::kStep}),
  };
  for (const auto& m : models) {
    const std::string text = wclt::io::model_to_json(m);
    CAPTURE(text);
    const auto back = wclt::io::parse_model(text);
    CHECK(wclt::io::model_to_json(back) == text);
    for (double t : {-0.5, 0.3, 1.2, 1.7, 5.0}) CHECK(back.cdf(t) == m.cdf(t));
  }
  auto withk = DistributionModel(wclt::Uniform{-1, 1});
  withk.set_density_bound(0.5);
  CHECK(wclt::io::parse_model(wclt::io::model_to_json(withk)).density_bound() == 0.5);
}

TEST_CASE("process specs round-trip through JSON") {
  const std::vector<wclt::ProcessSpec> specs{
      wclt::IidProcess{DistributionModel(wclt::Exponential{1.0})},
      wclt::IntermittentMapProcess{0.3, 0.1, 500},
      wclt::DoublingMapProcess{0.25, 10},
      wclt::CausalLinearProcess{wclt::CoeffFamily(wclt::PolynomialCoefficients{2.5, 1.0, 0.5}),
                                DistributionModel(wclt::Uniform{-1, 1}), 30},
  };
  for (const auto& s : specs) {
    const std::string text = wclt::io::spec_to_json(s);
    CHECK(wclt::io::spec_to_json(wclt::io::parse_process(text)) == text);
  }
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_AS(wclt::io::parse_model(R"({"kind":"uniform","lo":0,"hi":1,"extra":2})"), wclt::ValidationError);
  CHECK_THROWS_AS(wclt::io::parse_model(R"({"kind":"gaussian"})"), wclt::ValidationError);
  CHECK_THROWS_AS(wclt::io::parse_model(R"({"kind":"uniform","lo":"zero"})"), wclt::ValidationError);
  CHECK_THROWS_AS(wclt::io::parse_model("{not json"), wclt::ValidationError);
  CHECK_THROWS_AS(wclt::io::parse_process(R"({"kind":"doubling","a":-1})"), wclt::ValidationError);
  CHECK_THROWS_AS(wclt::io::parse_mixing_bound(R"({"kind":"phi_geometric","c1":1,"rho":2})"), wclt::ValidationError);
  CHECK(wclt::io::parse_mixing_bound(R"({"kind":"alpha_polynomial","c_gamma":1,"gamma":0.25})").name() ==
        "alpha_polynomial");
  CHECK_THROWS_AS(wclt::io::parse_experiment_config(R"({"schema_version":2,"n_values":[10]})"), wclt::ValidationError);
  CHECK_THROWS_AS(wclt::io::parse_experiment_config(R"({"n_values":[10],"bogus":1})"), wclt::ValidationError);
}

TEST_CASE("experiment config parsing and echo") {
  const std::string text = R"({
    "schema_version": 1,
    "process": {"kind": "doubling", "a": 0.25, "burn_in": 100},
    "n_values": [100, 1000],
    "replications": 20,
    "base_seed": 9,
    "threads": 3,
    "grid": {"size": 64, "scheme": "uniform"},
    "limit": {"K": 12, "sim_length": 20000, "replications": 500},
    "reference": {"model": {"kind": "pareto_tail", "scale": 1, "exponent": 4}},
    "output": {"dir": "out", "prefix": "run"}
  })";
  const auto cfg = wclt::io::parse_experiment_config(text);
  CHECK(cfg.n_values == std::vector<std::size_t>{100, 1000});
  CHECK(cfg.replications == 20);
  CHECK(cfg.base_seed == 9);
  CHECK(cfg.threads == 3);
  CHECK(cfg.grid.size == 64);
  CHECK(cfg.grid.scheme == wclt::GridScheme::kUniform);
  CHECK(cfg.limit.lag_cutoff == 12);
  CHECK(cfg.limit.sim_length == 20000);
  CHECK(cfg.limit.replications == 500);
  REQUIRE(cfg.reference.model.has_value());
  CHECK(cfg.output.prefix == "run");
  CHECK(std::holds_alternative<wclt::DoublingMapProcess>(cfg.process));

  const json echo = json::parse(wclt::io::to_json(cfg));
  CHECK(echo["schema_version"] == 1);
  CHECK(!echo.contains("threads"));
  const auto again = wclt::io::parse_experiment_config(echo.dump());
  CHECK(wclt::io::to_json(again) == wclt::io::to_json(cfg));
}

TEST_CASE("reports serialize non-finite values as null") {
  wclt::ConditionReport r;
  r.verdict = wclt::Verdict::kDiverges;
  r.partial_sum = std::numeric_limits<double>::infinity();
  r.terms_used = 3;
  r.notes = "x";
  const json j = json::parse(wclt::io::to_json(r));
  CHECK(j["verdict"] == "diverges");
  CHECK(j["partial_sum"].is_null());
  CHECK(j["tail_bound"].is_null());
  CHECK(j["terms_used"] == 3);
  CHECK(j["notes"] == "x");
}

TEST_CASE("statistic sample and covariance JSON") {
  wclt::StatisticSample s;
  s.values = {0.5, 0.25};
  s.n = 10;
  s.seed = 4;
  const json j = json::parse(wclt::io::to_json(s));
  CHECK(j["kind"] == "finite_n");
  CHECK(j["values"].size() == 2);
  const auto cg = wclt::covariance_iid(DistributionModel(wclt::Uniform{0, 1}), std::vector<double>{0.25, 0.75});
  const json c = json::parse(wclt::io::to_json(cg));
  CHECK(c["matrix"][0][1].get<double>() == doctest::Approx(0.0625));
  CHECK(c["source"] == "analytic_iid");
}

TEST_CASE("value CSV round trip") {
  const std::vector<double> v{0.1, 1.0 / 7.0, 12345.6789, 0.0};
  const std::string text = wclt::io::values_csv(v);
  CHECK(text.rfind("value\n", 0) == 0);
  std::istringstream is(text);
  CHECK(wclt::io::read_values_csv(is) == v);

  std::istringstream bare("# comment\n1.5\n2.5\n\n");
  CHECK(wclt::io::read_values_csv(bare) == std::vector<double>{1.5, 2.5});
  std::istringstream bad("value\n1.0\nabc\n");
  CHECK_THROWS_AS(wclt::io::read_values_csv(bad), wclt::ValidationError);
}

TEST_CASE("path CSV carries spec and seed") {
  const auto path = wclt::generate(wclt::IidProcess{DistributionModel(wclt::Uniform{0, 1})}, 5, 31);
  std::ostringstream os;
  wclt::io::write_path_csv(os, path);
  const std::string text = os.str();
  CHECK(text.rfind("# ", 0) == 0);
  CHECK(text.find("seed=31") != std::string::npos);
  std::istringstream is(text);
  CHECK(wclt::io::read_values_csv(is) == path.values);
}
