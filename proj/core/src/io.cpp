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

#include "wclt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "wclt/errors.hpp"

namespace wclt {
namespace {

using json = nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num_array(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw ValidationError(where + ": unknown field '" + it.key() + "'");
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(where + ": missing field '" + key + "'");
  return *it;
}

double get_double(const json& j, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  if (!it->is_number()) throw ValidationError(where + ": field '" + std::string(key) + "' must be a number");
  return it->get<double>();
}

std::uint64_t get_count(const json& j, const char* key, const std::string& where,
                        std::optional<std::uint64_t> fallback = {}) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  if (!it->is_number_unsigned())
    throw ValidationError(where + ": field '" + std::string(key) + "' must be a nonnegative integer");
  return it->get<std::uint64_t>();
}

std::vector<double> get_doubles(const json& j, const char* key, const std::string& where) {
  const json& a = field(j, key, where);
  if (!a.is_array()) throw ValidationError(where + ": field '" + std::string(key) + "' must be an array");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) throw ValidationError(where + ": field '" + std::string(key) + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  const json& s = field(j, key, where);
  if (!s.is_string()) throw ValidationError(where + ": field '" + std::string(key) + "' must be a string");
  return s.get<std::string>();
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

json model_json(const DistributionModel& m) {
  json j = std::visit(
      overloaded{
          [](const Uniform& u) { return json{{"kind", "uniform"}, {"lo", u.lo}, {"hi", u.hi}}; },
          [](const Exponential& e) { return json{{"kind", "exponential"}, {"rate", e.rate}}; },
          [](const ParetoTail& p) { return json{{"kind", "pareto_tail"}, {"scale", p.scale}, {"exponent", p.exponent}}; },
          [](const PowerPushforward& p) {
            json o{{"kind", "power_pushforward"}, {"exponent", p.exponent}};
            if (p.base)
              o["base"] = json{{"grid", p.base->grid}, {"cdf", p.base->cdf}, {"origin_exponent", p.base->origin_exponent}};
            return o;
          },
          [](const Tabulated& t) {
            return json{{"kind", "tabulated"},
                        {"grid", t.grid},
                        {"cdf", t.cdf},
                        {"interpolation", t.interpolation == Interpolation::kLinear ? "linear" : "step"}};
          },
      },
      m.kind());
  if (m.density_bound()) j["density_bound"] = *m.density_bound();
  return j;
}

DistributionModel model_from(const json& j) {
  const std::string where = "model";
  if (!j.is_object()) throw ValidationError("model: expected a JSON object");
  const std::string kind = get_string(j, "kind", where);
  auto finish = [&](DistributionModel m) {
    if (j.contains("density_bound")) m.set_density_bound(get_double(j, "density_bound", where));
    return m;
  };
  if (kind == "uniform") {
    check_keys(j, {"kind", "lo", "hi", "density_bound"}, where);
    return finish(DistributionModel(Uniform{get_double(j, "lo", where, 0.0), get_double(j, "hi", where, 1.0)}));
  }
  if (kind == "exponential") {
    check_keys(j, {"kind", "rate", "density_bound"}, where);
    return finish(DistributionModel(Exponential{get_double(j, "rate", where, 1.0)}));
  }
  if (kind == "pareto_tail" || kind == "pareto") {
    check_keys(j, {"kind", "scale", "exponent", "density_bound"}, where);
    return finish(DistributionModel(ParetoTail{get_double(j, "scale", where, 1.0), get_double(j, "exponent", where)}));
  }
  if (kind == "power_pushforward") {
    check_keys(j, {"kind", "exponent", "base", "density_bound"}, where);
    PowerPushforward p{get_double(j, "exponent", where), std::nullopt};
    if (j.contains("base")) {
      const json& b = j["base"];
      check_keys(b, {"grid", "cdf", "origin_exponent"}, "model.base");
      p.base = TabulatedBase{get_doubles(b, "grid", "model.base"), get_doubles(b, "cdf", "model.base"),
                             get_double(b, "origin_exponent", "model.base", 1.0)};
    }
    return finish(DistributionModel(std::move(p)));
  }
  if (kind == "tabulated") {
    check_keys(j, {"kind", "grid", "cdf", "interpolation", "density_bound"}, where);
    Tabulated t{get_doubles(j, "grid", where), get_doubles(j, "cdf", where), Interpolation::kLinear};
    if (j.contains("interpolation")) {
      const std::string mode = get_string(j, "interpolation", where);
      if (mode == "step") {
        t.interpolation = Interpolation::kStep;
      } else if (mode != "linear") {
        throw ValidationError("model: interpolation must be 'linear' or 'step'");
      }
    }
    return finish(DistributionModel(std::move(t)));
  }
  throw ValidationError("model: unknown kind '" + kind + "'");
}

json coefficients_json(const CoeffFamily& f) {
  return std::visit(overloaded{
                        [](const GeometricCoefficients& g) {
                          return json{{"kind", "geometric"}, {"rho", g.rho}, {"scale", g.scale}};
                        },
                        [](const PolynomialCoefficients& p) {
                          return json{{"kind", "polynomial"}, {"beta", p.beta}, {"offset", p.offset}, {"scale", p.scale}};
                        },
                    },
                    f.kind());
}

CoeffFamily coefficients_from(const json& j) {
  const std::string where = "coefficients";
  if (!j.is_object()) throw ValidationError("coefficients: expected a JSON object");
  const std::string kind = get_string(j, "kind", where);
  if (kind == "geometric") {
    check_keys(j, {"kind", "rho", "scale"}, where);
    return CoeffFamily(GeometricCoefficients{get_double(j, "rho", where), get_double(j, "scale", where, 1.0)});
  }
  if (kind == "polynomial") {
    check_keys(j, {"kind", "beta", "offset", "scale"}, where);
    return CoeffFamily(PolynomialCoefficients{get_double(j, "beta", where), get_double(j, "offset", where, 1.0),
                                              get_double(j, "scale", where, 1.0)});
  }
  throw ValidationError("coefficients: unknown kind '" + kind + "'");
}

json spec_json(const ProcessSpec& spec) {
  return std::visit(overloaded{
                        [](const IidProcess& p) { return json{{"kind", "iid"}, {"model", model_json(p.model)}}; },
                        [](const IntermittentMapProcess& p) {
                          return json{{"kind", "intermittent"},
                                      {"gamma", p.gamma},
                                      {"a", p.observable_exponent},
                                      {"burn_in", p.burn_in}};
                        },
                        [](const DoublingMapProcess& p) {
                          return json{{"kind", "doubling"}, {"a", p.observable_exponent}, {"burn_in", p.burn_in}};
                        },
                        [](const CausalLinearProcess& p) {
                          return json{{"kind", "causal_linear"},
                                      {"coefficients", coefficients_json(p.coefficients)},
                                      {"innovation", model_json(p.innovation)},
                                      {"truncation", p.truncation}};
                        },
                    },
                    spec);
}

ProcessSpec spec_from(const json& j) {
  const std::string where = "process";
  if (!j.is_object()) throw ValidationError("process: expected a JSON object");
  const std::string kind = get_string(j, "kind", where);
  ProcessSpec spec = IidProcess{DistributionModel(Uniform{})};
  if (kind == "iid") {
    check_keys(j, {"kind", "model"}, where);
    spec = IidProcess{model_from(field(j, "model", where))};
  } else if (kind == "intermittent") {
    check_keys(j, {"kind", "gamma", "a", "burn_in"}, where);
    spec = IntermittentMapProcess{get_double(j, "gamma", where), get_double(j, "a", where),
                                  get_count(j, "burn_in", where, 10000)};
  } else if (kind == "doubling") {
    check_keys(j, {"kind", "a", "burn_in"}, where);
    spec = DoublingMapProcess{get_double(j, "a", where), get_count(j, "burn_in", where, 10000)};
  } else if (kind == "causal_linear") {
    check_keys(j, {"kind", "coefficients", "innovation", "truncation"}, where);
    spec = CausalLinearProcess{coefficients_from(field(j, "coefficients", where)),
                               model_from(field(j, "innovation", where)), get_count(j, "truncation", where, 0)};
  } else {
    throw ValidationError("process: unknown kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

json mixing_json(const MixingBound& b) {
  return std::visit(overloaded{
                        [](const PhiGeometric& k) { return json{{"kind", "phi_geometric"}, {"c1", k.c1}, {"rho", k.rho}}; },
                        [](const AlphaPolynomial& k) {
                          return json{{"kind", "alpha_polynomial"}, {"c_gamma", k.c_gamma}, {"gamma", k.gamma}};
                        },
                        [](const ConstantMixing& k) { return json{{"kind", "constant"}, {"value", k.value}}; },
                    },
                    b.kind());
}

json spec_or_text(const std::string& text) {
  if (text.empty()) return nullptr;
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

}  // namespace

std::string describe(const ProcessSpec& spec) { return spec_json(spec).dump(); }

namespace io {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string model_to_json(const DistributionModel& m) { return model_json(m).dump(); }
std::string spec_to_json(const ProcessSpec& spec) { return spec_json(spec).dump(); }
std::string mixing_bound_to_json(const MixingBound& b) { return mixing_json(b).dump(); }

std::string to_json(const ConditionReport& r) {
  json j{{"verdict", to_string(r.verdict)},
         {"partial_sum", num(r.partial_sum)},
         {"terms_used", r.terms_used},
         {"tail_bound", r.tail_bound ? num(*r.tail_bound) : json(nullptr)},
         {"term_exponent", r.term_exponent ? num(*r.term_exponent) : json(nullptr)},
         {"notes", r.notes}};
  json comps = json::array();
  for (const auto& [name, v] : r.components) comps.push_back(json{{"name", name}, {"verdict", to_string(v)}});
  j["components"] = comps;
  return j.dump(2);
}

std::string to_json(const CovarianceGrid& cg) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < cg.matrix.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < cg.matrix.cols(); ++k) row.push_back(num(cg.matrix(i, k)));
    rows.push_back(std::move(row));
  }
  json j{{"grid", num_array(cg.grid)},
         {"matrix", rows},
         {"lag_cutoff", cg.lag_cutoff},
         {"psd_repair",
          {{"jitter_added", num(cg.psd_repair.jitter_added)},
           {"eigenvalues_clipped", cg.psd_repair.eigenvalues_clipped},
           {"min_eigenvalue", num(cg.psd_repair.min_eigenvalue)}}},
         {"source", to_string(cg.source)},
         {"tail_bias_bound", num(cg.tail_bias_bound)}};
  return j.dump(2);
}

std::string to_json(const StatisticSample& s) {
  json j{{"kind", to_string(s.kind)},
         {"n", s.n},
         {"R", s.values.size()},
         {"seed", s.seed},
         {"spec", spec_or_text(s.spec)},
         {"values", num_array(s.values)}};
  return j.dump(2);
}

std::string to_json(const ComparisonReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"n", row.n}, {"ks", num(row.ks)}, {"w1", num(row.w1)}, {"mean_gap", num(row.mean_gap)},
                        {"median", num(row.median)}});
  json j{{"ks_two_sample", num(r.ks_two_sample)},
         {"w1_between_statistics", num(r.w1_between_statistics)},
         {"mean_gap", num(r.mean_gap)},
         {"ks_critical_5pct", num(r.ks_critical_5pct)},
         {"rows", rows},
         {"verdict", r.verdict}};
  return j.dump(2);
}

std::string to_json(const ProbeReport& r) {
  json j{{"gamma", r.gamma},
         {"a", r.a},
         {"n_values", r.n_values},
         {"medians", num_array(r.medians)},
         {"ratios", num_array(r.ratios)},
         {"cumulative_factor", num(r.cumulative_factor)},
         {"threshold", r.threshold},
         {"verdict", r.verdict},
         {"calibration_error", num(r.calibration_error)}};
  return j.dump(2);
}

std::string to_json(const ExperimentConfig& cfg) {
  json limit{{"K", cfg.limit.lag_cutoff ? json(*cfg.limit.lag_cutoff) : json(nullptr)},
             {"sim_length", cfg.limit.sim_length},
             {"replications", cfg.limit.replications}};
  json reference{{"calibrate", cfg.reference.calibrate}, {"calibration_length", cfg.reference.calibration_length}};
  if (cfg.reference.model) reference["model"] = model_json(*cfg.reference.model);
  json j{{"schema_version", cfg.schema_version},
         {"process", spec_json(cfg.process)},
         {"n_values", cfg.n_values},
         {"replications", cfg.replications},
         {"base_seed", cfg.base_seed},
         {"grid",
          {{"size", cfg.grid.size},
           {"scheme", to_string(cfg.grid.scheme)},
           {"tail_tol", cfg.grid.tail_tol},
           {"tail_points", cfg.grid.tail_points}}},
         {"limit", limit},
         {"reference", reference},
         {"output", {{"dir", cfg.output.dir}, {"prefix", cfg.output.prefix}}}};
  return j.dump(2);
}

DistributionModel parse_model(const std::string& text) { return model_from(parse_text(text)); }
ProcessSpec parse_process(const std::string& text) { return spec_from(parse_text(text)); }
CoeffFamily parse_coefficients(const std::string& text) { return coefficients_from(parse_text(text)); }

MixingBound parse_mixing_bound(const std::string& text) {
  const json j = parse_text(text);
  const std::string where = "mixing bound";
  if (!j.is_object()) throw ValidationError("mixing bound: expected a JSON object");
  const std::string kind = get_string(j, "kind", where);
  if (kind == "phi_geometric") {
    check_keys(j, {"kind", "c1", "rho"}, where);
    return MixingBound(PhiGeometric{get_double(j, "c1", where, 1.0), get_double(j, "rho", where)});
  }
  if (kind == "alpha_polynomial") {
    check_keys(j, {"kind", "c_gamma", "gamma"}, where);
    return MixingBound(AlphaPolynomial{get_double(j, "c_gamma", where, 1.0), get_double(j, "gamma", where)});
  }
  if (kind == "constant") {
    check_keys(j, {"kind", "value"}, where);
    return MixingBound(ConstantMixing{get_double(j, "value", where, 1.0)});
  }
  throw ValidationError("mixing bound: unknown kind '" + kind + "'");
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const json j = parse_text(text);
  const std::string where = "config";
  check_keys(j, {"schema_version", "process", "n_values", "replications", "base_seed", "threads", "grid", "limit",
                 "reference", "output"},
             where);
  ExperimentConfig cfg;
  cfg.schema_version = static_cast<int>(get_count(j, "schema_version", where));
  if (cfg.schema_version != 1) throw ValidationError("config: unsupported schema_version");
  cfg.process = spec_from(field(j, "process", where));
  const json& ns = field(j, "n_values", where);
  if (!ns.is_array()) throw ValidationError("config: n_values must be an array");
  for (const auto& n : ns) {
    if (!n.is_number_unsigned()) throw ValidationError("config: n_values must hold positive integers");
    cfg.n_values.push_back(n.get<std::size_t>());
  }
  cfg.replications = get_count(j, "replications", where);
  cfg.base_seed = get_count(j, "base_seed", where, 0);
  cfg.threads = get_count(j, "threads", where, 0);
  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, {"size", "scheme", "tail_tol", "tail_points"}, "config.grid");
    cfg.grid.size = get_count(g, "size", "config.grid", cfg.grid.size);
    if (g.contains("scheme")) cfg.grid.scheme = grid_scheme_from_string(get_string(g, "scheme", "config.grid"));
    cfg.grid.tail_tol = get_double(g, "tail_tol", "config.grid", cfg.grid.tail_tol);
    cfg.grid.tail_points = get_count(g, "tail_points", "config.grid", cfg.grid.tail_points);
  }
  if (j.contains("limit")) {
    const json& l = j["limit"];
    check_keys(l, {"K", "sim_length", "replications"}, "config.limit");
    if (l.contains("K") && !l["K"].is_null()) cfg.limit.lag_cutoff = get_count(l, "K", "config.limit");
    cfg.limit.sim_length = get_count(l, "sim_length", "config.limit", cfg.limit.sim_length);
    cfg.limit.replications = get_count(l, "replications", "config.limit", cfg.limit.replications);
  }
  if (j.contains("reference")) {
    const json& r = j["reference"];
    check_keys(r, {"model", "calibrate", "calibration_length"}, "config.reference");
    if (r.contains("model") && !r["model"].is_null()) cfg.reference.model = model_from(r["model"]);
    if (r.contains("calibrate")) {
      if (!r["calibrate"].is_boolean()) throw ValidationError("config.reference: calibrate must be a boolean");
      cfg.reference.calibrate = r["calibrate"].get<bool>();
    }
    cfg.reference.calibration_length = get_count(r, "calibration_length", "config.reference", 0);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, {"dir", "prefix"}, "config.output");
    if (o.contains("dir")) cfg.output.dir = get_string(o, "dir", "config.output");
    if (o.contains("prefix")) cfg.output.prefix = get_string(o, "prefix", "config.output");
  }
  validate(cfg);
  return cfg;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + p.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + p.string());
}

void write_values_csv(std::ostream& os, std::span<const double> values) {
  os << "value\n";
  for (double v : values) os << format_double(v) << '\n';
}

std::string values_csv(std::span<const double> values) {
  std::ostringstream os;
  write_values_csv(os, values);
  return os.str();
}

std::vector<double> read_values_csv(std::istream& is) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    const char* b = line.data() + first;
    const char* e = line.data() + last + 1;
    if (*b == '+') ++b;
    double v = 0.0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) {
      if (!header_seen && out.empty()) {
        header_seen = true;
        continue;
      }
      throw ValidationError("CSV line " + std::to_string(lineno) + ": not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> read_values_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ValidationError("cannot read " + p.string());
  return read_values_csv(in);
}

void write_path_csv(std::ostream& os, const Path& p) {
  os << "# " << spec_json(p.spec).dump() << " seed=" << p.seed << '\n';
  write_values_csv(os, p.values);
}

}  // namespace io
}  // namespace wclt
