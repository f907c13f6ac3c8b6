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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wclt/conditions.hpp"
#include "wclt/errors.hpp"
#include "wclt/harness.hpp"
#include "wclt/io.hpp"
#include "wclt/limitlaw.hpp"
#include "wclt/processes.hpp"
#include "wclt/transport.hpp"

namespace wclt::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> out_dir;
  std::string config;
};

json load_json(const std::string& path) {
  try {
    return json::parse(io::read_text(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
}

const json& require_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T value_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type");
  }
}

void check_schema(const json& j, const std::string& where) {
  if (j.contains("schema_version") && j.at("schema_version") != 1)
    throw ValidationError(where + ": unsupported schema_version");
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir.empty() ? "." : dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ValidationError("cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

ExperimentConfig load_experiment(const Common& c) {
  if (c.config.empty()) throw ValidationError("--config is required");
  ExperimentConfig cfg = io::parse_experiment_config(io::read_text(c.config));
  if (c.seed) cfg.base_seed = *c.seed;
  if (c.threads) cfg.threads = *c.threads;
  if (c.out_dir) cfg.output.dir = *c.out_dir;
  return cfg;
}

// Writes `text` to out-dir/name when an output directory was requested.
void maybe_write(const Common& c, const std::string& name, const std::string& text) {
  if (!c.out_dir) return;
  io::write_text(prepare_dir(*c.out_dir) / name, text);
}

std::string sample_file(const ExperimentConfig& cfg, std::size_t n) {
  return cfg.output.prefix + "_n" + std::to_string(n) + ".csv";
}

std::string table_csv(const ComparisonReport& r) {
  std::ostringstream os;
  os << "n,ks,w1,mean_gap,median\n";
  for (const auto& row : r.rows)
    os << row.n << ',' << io::format_double(row.ks) << ',' << io::format_double(row.w1) << ','
       << io::format_double(row.mean_gap) << ',' << io::format_double(row.median) << '\n';
  return os.str();
}

json limit_summary(const LimitResult& lim) {
  return json{{"grid_points", lim.grid.points.size()},
              {"bulk_points", lim.grid.bulk_points},
              {"lag_cutoff", lim.covariance.lag_cutoff},
              {"source", to_string(lim.covariance.source)},
              {"jitter_added", lim.covariance.psd_repair.jitter_added},
              {"eigenvalues_clipped", lim.covariance.psd_repair.eigenvalues_clipped},
              {"tail_bias_bound", std::isfinite(lim.grid.tail_bias_bound) ? json(lim.grid.tail_bias_bound) : json()},
              {"replications", lim.sample.values.size()},
              {"seed", lim.sample.seed}};
}

json reference_summary(const Reference& ref) {
  return json{{"kind", ref.model.kind_name()},
              {"calibrated", ref.calibrated},
              {"calibration_length", ref.calibration_length},
              {"calibration_error", ref.calibration_error}};
}

// ------------------------------------------------------------ subcommands

int cmd_generate(const Common& c, std::optional<std::size_t> n_flag, std::ostream& out) {
  if (c.config.empty()) throw ValidationError("--config is required");
  const json j = load_json(c.config);
  check_schema(j, c.config);
  const ProcessSpec spec = io::parse_process(require_field(j, "process", c.config).dump());
  const std::size_t n = n_flag ? *n_flag : value_or<std::size_t>(j, "n", 0);
  if (n == 0) throw ValidationError("path length n must be positive (config 'n' or --n)");
  const std::uint64_t seed = c.seed ? *c.seed : value_or<std::uint64_t>(j, "seed", 0);
  const Path p = generate(spec, n, seed);
  const fs::path dir = prepare_dir(c.out_dir.value_or(value_or<std::string>(j, "out_dir", ".")));
  const fs::path file = dir / value_or<std::string>(j, "file", "path.csv");
  std::ostringstream os;
  io::write_path_csv(os, p);
  io::write_text(file, os.str());
  out << json{{"path", file.string()}, {"n", n}, {"seed", seed}, {"truncation_error_bound", p.truncation_error_bound},
              {"reseeded_states", p.reseeded_states}}
             .dump(2)
      << '\n';
  return 0;
}

int cmd_w1(const Common& c, const std::string& x, const std::string& y, const std::string& model, std::ostream& out) {
  if (x.empty()) throw ValidationError("--x is required");
  if (y.empty() == model.empty()) throw ValidationError("give exactly one of --y and --model");
  const SortedSample sx(io::read_values_csv(x));
  double d = 0.0;
  if (!y.empty()) {
    d = w1_two_samples(sx, SortedSample(io::read_values_csv(y)));
  } else {
    d = w1_sample_vs_model(sx, io::parse_model(io::read_text(model))).require_finite("w1");
  }
  out << io::format_double(d) << '\n';
  maybe_write(c, "w1.json", json{{"w1", d}}.dump(2) + "\n");
  return 0;
}

ConditionReport run_check_config(const json& j, const std::string& where) {
  check_schema(j, where);
  const std::string kind = value_or<std::string>(j, "check", "");
  const std::size_t terms = value_or<std::size_t>(j, "terms", 0);
  if (kind == "intermittent") {
    return check_intermittent_threshold(require_field(j, "gamma", where).get<double>(),
                                        require_field(j, "a", where).get<double>(), terms ? terms : 1000);
  }
  if (kind == "phi" || kind == "alpha") {
    const MixingBound b = io::parse_mixing_bound(require_field(j, "bound", where).dump());
    const DistributionModel m = io::parse_model(require_field(j, "model", where).dump());
    return kind == "phi" ? check_phi_condition(b, m, terms) : check_alpha_condition(b, m, terms ? terms : 1000);
  }
  if (kind == "linear") {
    const CoeffFamily f = io::parse_coefficients(require_field(j, "coefficients", where).dump());
    const DistributionModel eps = io::parse_model(require_field(j, "innovation", where).dump());
    const LinearMode mode = linear_mode_from_string(value_or<std::string>(j, "mode", "tail_314"));
    LinearCheckOptions opt;
    if (j.contains("moment_r")) opt.moment_r = j.at("moment_r").get<double>();
    if (j.contains("marginal")) opt.marginal = io::parse_model(j.at("marginal").dump());
    if (terms) opt.terms = terms;
    return check_linear_conditions(f, eps, mode, opt);
  }
  throw ValidationError(where + ": 'check' must be one of intermittent, phi, alpha, linear");
}

int cmd_check(const Common& c, std::optional<double> gamma, std::optional<double> a, std::ostream& out) {
  ConditionReport r;
  if (gamma || a) {
    if (!gamma || !a) throw ValidationError("--gamma and --a go together");
    r = check_intermittent_threshold(*gamma, *a);
  } else if (!c.config.empty()) {
    r = run_check_config(load_json(c.config), c.config);
  } else {
    throw ValidationError("give --gamma and --a, or --config");
  }
  const std::string text = io::to_json(r);
  out << text << '\n';
  maybe_write(c, "check.json", text + "\n");
  return 0;
}

int cmd_limit(const Common& c, std::ostream& out) {
  const ExperimentConfig cfg = load_experiment(c);
  const Reference ref = resolve_reference(cfg);
  const LimitResult lim = run_limit(cfg, ref.model);
  const fs::path dir = prepare_dir(cfg.output.dir);
  io::write_text(dir / (cfg.output.prefix + "_limit.csv"), io::values_csv(lim.sample.values));
  json cov = json::parse(io::to_json(lim.covariance));
  cov["config"] = json::parse(io::to_json(cfg));
  io::write_text(dir / (cfg.output.prefix + "_covariance.json"), cov.dump(2) + "\n");
  json summary{{"limit", limit_summary(lim)}, {"reference", reference_summary(ref)}};
  out << summary.dump(2) << '\n';
  return 0;
}

int cmd_experiment(const Common& c, std::ostream& out) {
  const ExperimentConfig cfg = load_experiment(c);
  const ExperimentResult res = run_clt_experiment(cfg);
  const LimitResult lim = run_limit(cfg, res.reference.model);
  const ComparisonReport cmp = compare_experiment(res.samples, lim.sample);

  const fs::path dir = prepare_dir(cfg.output.dir);
  json artifacts = json::array();
  for (const auto& s : res.samples) {
    const std::string name = sample_file(cfg, s.n);
    io::write_text(dir / name, io::values_csv(s.values));
    artifacts.push_back(name);
  }
  const std::string limit_name = cfg.output.prefix + "_limit.csv";
  io::write_text(dir / limit_name, io::values_csv(lim.sample.values));
  artifacts.push_back(limit_name);
  const std::string table_name = cfg.output.prefix + "_table.csv";
  io::write_text(dir / table_name, table_csv(cmp));
  artifacts.push_back(table_name);
  const std::string report_name = cfg.output.prefix + "_report.json";
  artifacts.push_back(report_name);

  json report{{"config", json::parse(io::to_json(cfg))},
              {"reference", reference_summary(res.reference)},
              {"limit", limit_summary(lim)},
              {"comparison", json::parse(io::to_json(cmp))},
              {"artifacts", artifacts}};
  io::write_text(dir / report_name, report.dump(2) + "\n");
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_compare(const Common& c, const std::string& a, const std::string& b, std::ostream& out) {
  if (a.empty() || b.empty()) throw ValidationError("--a and --b are required");
  StatisticSample sa, sb;
  sa.values = io::read_values_csv(a);
  sb.values = io::read_values_csv(b);
  if (sa.values.empty() || sb.values.empty()) throw ValidationError("empty statistic sample");
  const std::string text = io::to_json(compare_distributions(sa, sb));
  out << text << '\n';
  maybe_write(c, "compare.json", text + "\n");
  return 0;
}

struct ProbeFlags {
  std::optional<double> gamma, a, threshold;
  std::vector<std::size_t> n_values;
  std::optional<std::size_t> replications;
};

int cmd_probe(const Common& c, const ProbeFlags& f, std::ostream& out) {
  json j = json::object();
  if (!c.config.empty()) {
    j = load_json(c.config);
    check_schema(j, c.config);
  }
  const double gamma = f.gamma ? *f.gamma : value_or<double>(j, "gamma", 0.25);
  if (!f.a && !j.contains("a")) throw ValidationError("--a (or config 'a') is required");
  const double a = f.a ? *f.a : j.at("a").get<double>();
  std::vector<std::size_t> ns = f.n_values;
  if (ns.empty()) ns = value_or<std::vector<std::size_t>>(j, "n_values", {4096, 16384, 65536});
  const std::size_t R = f.replications ? *f.replications : value_or<std::size_t>(j, "replications", 500);
  const double threshold = f.threshold ? *f.threshold : value_or<double>(j, "threshold", 1.5);
  const std::uint64_t seed = c.seed ? *c.seed : value_or<std::uint64_t>(j, "base_seed", 0);
  const std::size_t threads = c.threads ? *c.threads : value_or<std::size_t>(j, "threads", 0);
  if (R < 2) throw ValidationError("replications must be at least 2");
  const std::string text = io::to_json(divergence_probe(gamma, a, ns, R, seed, threshold, threads));
  out << text << '\n';
  maybe_write(c, "probe.json", text + "\n");
  return 0;
}

int cmd_report(const Common& c, std::ostream& out) {
  const ExperimentConfig cfg = load_experiment(c);
  const fs::path dir(cfg.output.dir);
  std::vector<StatisticSample> samples;
  for (std::size_t n : cfg.n_values) {
    StatisticSample s;
    s.n = n;
    s.values = io::read_values_csv(dir / sample_file(cfg, n));
    samples.push_back(std::move(s));
  }
  StatisticSample lim;
  lim.kind = StatisticKind::kLimitFunctional;
  lim.values = io::read_values_csv(dir / (cfg.output.prefix + "_limit.csv"));
  const ComparisonReport cmp = compare_experiment(samples, lim);
  io::write_text(dir / (cfg.output.prefix + "_table.csv"), table_csv(cmp));
  const std::string text = io::to_json(cmp);
  out << text << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) { return cli_main(argc, argv, std::cout, std::cerr); }

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"wclt: empirical-process L1 limit theorems under dependence", "wclt"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Base seed (overrides the config)");
  app.add_option("--threads", common.threads, "Worker threads; 0 uses all cores");
  app.add_option("--out-dir", common.out_dir, "Directory for artifacts");
  app.add_option("--config", common.config, "JSON config file");

  auto* gen = app.add_subcommand("generate", "Simulate one path and write it as CSV");
  std::optional<std::size_t> gen_n;
  gen->add_option("--n", gen_n, "Path length");

  auto* w1 = app.add_subcommand("w1", "Exact W1 between two samples, or a sample and a model");
  std::string w1_x, w1_y, w1_model;
  w1->add_option("--x", w1_x, "CSV sample");
  w1->add_option("--y", w1_y, "CSV sample");
  w1->add_option("--model", w1_model, "JSON model file");

  auto* check = app.add_subcommand("check", "Evaluate a summability condition");
  std::optional<double> check_gamma, check_a;
  check->add_option("--gamma", check_gamma, "Intermittent map parameter");
  check->add_option("--a", check_a, "Observable exponent");

  auto* limit = app.add_subcommand("limit", "Sample the limit functional for a config");
  auto* experiment = app.add_subcommand("experiment", "Finite-n replicates, limit sample and comparison");

  auto* compare = app.add_subcommand("compare", "Compare two statistic samples");
  std::string cmp_a, cmp_b;
  compare->add_option("--a", cmp_a, "CSV statistic sample");
  compare->add_option("--b", cmp_b, "CSV statistic sample");

  auto* probe = app.add_subcommand("probe", "Median growth of T_n for the intermittent map");
  ProbeFlags pf;
  probe->add_option("--gamma", pf.gamma, "Intermittent map parameter");
  probe->add_option("--a", pf.a, "Observable exponent");
  probe->add_option("--n", pf.n_values, "Sample sizes");
  probe->add_option("--R", pf.replications, "Replications per n");
  probe->add_option("--threshold", pf.threshold, "Cumulative growth factor");

  auto* report = app.add_subcommand("report", "Rebuild the comparison table from experiment artifacts");

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("-", 0) == 0) {
      ++i;  // skip the option's value
      continue;
    }
    if (!app.get_subcommand_no_throw(arg)) {
      err << "error: unknown subcommand '" << arg << "'\n\n" << app.help();
      return 1;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*gen) return cmd_generate(common, gen_n, out);
    if (*w1) return cmd_w1(common, w1_x, w1_y, w1_model, out);
    if (*check) return cmd_check(common, check_gamma, check_a, out);
    if (*limit) return cmd_limit(common, out);
    if (*experiment) return cmd_experiment(common, out);
    if (*compare) return cmd_compare(common, cmp_a, cmp_b, out);
    if (*probe) return cmd_probe(common, pf, out);
    if (*report) return cmd_report(common, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace wclt::cli
