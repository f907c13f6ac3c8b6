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

#ifndef WCLT_IO_HPP_
#define WCLT_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wclt/conditions.hpp"
#include "wclt/distribution.hpp"
#include "wclt/harness.hpp"
#include "wclt/limitlaw.hpp"
#include "wclt/processes.hpp"

// JSON and CSV serialization. JSON is exchanged as text; non-finite
// numbers are written as null. Parse failures throw ValidationError.
namespace wclt::io {

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

std::string model_to_json(const DistributionModel& m);
std::string spec_to_json(const ProcessSpec& spec);
std::string mixing_bound_to_json(const MixingBound& b);
std::string to_json(const ConditionReport& r);
std::string to_json(const CovarianceGrid& cg);
std::string to_json(const StatisticSample& s);
std::string to_json(const ComparisonReport& r);
std::string to_json(const ProbeReport& r);
std::string to_json(const ExperimentConfig& cfg);

DistributionModel parse_model(const std::string& json);
ProcessSpec parse_process(const std::string& json);
MixingBound parse_mixing_bound(const std::string& json);
CoeffFamily parse_coefficients(const std::string& json);
ExperimentConfig parse_experiment_config(const std::string& json);

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& text);

// Header row `value`, then one number per line.
void write_values_csv(std::ostream& os, std::span<const double> values);
std::string values_csv(std::span<const double> values);
// Skips `#` comment lines and a non-numeric header row.
std::vector<double> read_values_csv(std::istream& is);
std::vector<double> read_values_csv(const std::filesystem::path& p);
// `# <spec json> seed=<seed>` comment, then the values as above.
void write_path_csv(std::ostream& os, const Path& p);

}  // namespace wclt::io

#endif  // WCLT_IO_HPP_
