//
// Copyright 2026 The lcgd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command line front end.  Subcommands print JSON for single results and
// versioned CSV for sweeps; outputs are byte-deterministic given flags
// and seed (bench timings excepted).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcgd/calibration.hpp"
#include "lcgd/matrix.hpp"
#include "lcgd/metrics.hpp"
#include "lcgd/noise.hpp"
#include "lcgd/sensitivity.hpp"
#include "lcgd/serialize.hpp"
#include "lcgd/trainer.hpp"

namespace {

using nlohmann::json;

// Bare file names honor LCGD_OUT_DIR; explicit paths are left alone.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path.find('/') != std::string::npos) return path;
  const char* dir = std::getenv("LCGD_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string d(dir);
  if (d.back() != '/') d += '/';
  return d + path;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: '" + csv + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

// Writes CSV either to stdout or to --out; returns the stream to use.
class CsvSink {
 public:
  explicit CsvSink(const std::string& out_path) {
    if (!out_path.empty()) {
      path_ = resolve_out(out_path);
      file_.open(path_);
      if (!file_) throw std::runtime_error("cannot open " + path_);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_file() const { return file_.is_open(); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
};

std::vector<double> lambda_grid(int m) {
  std::vector<double> grid;
  const double cap = 1.0 - 1.0 / m;
  for (int t = 0; t < m; ++t) {
    const double l = static_cast<double>(t) / (m - 1);
    if (l <= cap) grid.push_back(l);
  }
  return grid;
}

int cmd_sens(int n, int k, int b, double lambda, bool normalized,
             std::int64_t budget) {
  const lcgd::ParticipationSchema schema(n, k, b);
  json out;
  out["n"] = n;
  out["k"] = k;
  out["b"] = b;
  out["lambda"] = lambda;
  out["normalized"] = normalized;

  double structural;
  std::optional<double> closed;
  if (normalized) {
    structural = lcgd::sens_normalized(n, k, b, lambda);
  } else {
    structural = lcgd::sens_min_sep(lcgd::make_c_lambda(n, lambda), schema);
    closed = lcgd::sens_c_lambda_closed(n, k, b, lambda);
    out["closed_form"] = *closed;
    out["closed_form_exact_iff_kb_equals_n"] = (static_cast<long>(k) * b == n);
  }
  out["structural"] = structural;

  double max_rel = 0.0;
  if (closed && static_cast<long>(k) * b == n) {
    max_rel = std::abs(*closed - structural) / structural;
  }
  if (n <= 24) {
    const auto brute =
        normalized
            ? lcgd::sens_bruteforce(
                  lcgd::normalize_columns(lcgd::make_c_lambda(n, lambda)),
                  schema, budget)
            : lcgd::sens_bruteforce(lcgd::make_c_lambda(n, lambda), schema,
                                    budget);
    out["brute_force"] = brute.value;
    json pattern = json::array();
    for (int idx : brute.argmax.indices) pattern.push_back(idx + 1);
    out["brute_pattern_1based"] = pattern;
    max_rel = std::max(
        max_rel, std::abs(brute.value - structural) /
                     std::max(structural, 1e-300));
  }
  out["max_rel_disagreement"] = max_rel;
  out["agree_1e10"] = (max_rel <= 1e-10);
  std::cout << out.dump(2) << "\n";
  if (max_rel > 1e-10) {
    std::cerr << "warning: disagreement above 1e-10\n";
  }
  return 0;
}

int cmd_bounds(int n) {
  const lcgd::FullBatchBounds b = lcgd::full_batch_bounds(n);
  json out;
  out["n"] = n;
  out["trivial"] = b.trivial;
  out["diagonal"] = b.diagonal;
  out["lower"] = b.lower;
  out["trivial_over_diagonal"] = b.trivial / b.diagonal;
  out["diagonal_over_lower"] = b.diagonal / b.lower;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_sweep_lambda(int n, int k, int b, const std::string& metric_name,
                     int grid, bool as_json, const std::string& out_path) {
  const lcgd::ParticipationSchema schema(n, k, b);
  const lcgd::Metric metric = metric_name == "maxse" ? lcgd::Metric::kMaxse
                                                     : lcgd::Metric::kRmse;
  CsvSink sink(out_path);
  std::ostream& os = sink.stream();
  if (!as_json) {
    os << "# schema: lcgd.sweep-lambda.v1\n";
    os << "n,k,b,lambda,rmse,maxse,sens\n";
  }
  for (double l : lambda_grid(grid)) {
    const double rmse = lcgd::rmse_lambda_closed(n, k, b, l);
    const double maxse = lcgd::maxse_lambda_closed(n, k, b, l);
    const double sens = lcgd::sens_c_lambda(n, k, b, l);
    if (as_json) {
      json row{{"n", n},        {"k", k},         {"b", b},   {"lambda", l},
               {"rmse", rmse},  {"maxse", maxse}, {"sens", sens}};
      os << row.dump() << "\n";
    } else {
      os << n << ',' << k << ',' << b << ',' << lcgd::format_double(l) << ','
         << lcgd::format_double(rmse) << ',' << lcgd::format_double(maxse)
         << ',' << lcgd::format_double(sens) << "\n";
    }
  }
  const lcgd::LambdaOpt opt = lcgd::optimize_lambda(metric, schema, grid);
  json summary;
  summary["metric"] = metric_name;
  summary["lambda_star"] = opt.lambda_star;
  summary["value"] = opt.value;
  (sink.to_file() ? std::cout : std::cerr) << summary.dump() << "\n";
  return 0;
}

int cmd_rmse_table(int n, int k, int b, const std::string& lambdas,
                   bool normalized, const std::string& out_path) {
  const lcgd::ParticipationSchema schema(n, k, b);
  CsvSink sink(out_path);
  std::ostream& os = sink.stream();
  os << "# schema: lcgd.rmse-table.v1\n";
  os << "n,k,b,lambda,rmse,maxse,sens\n";
  for (double l : parse_list(lambdas)) {
    const lcgd::Factorization f =
        normalized ? lcgd::normalized_lambda_factorization(n, l)
                   : lcgd::lambda_factorization(n, l);
    const lcgd::MetricReport r = lcgd::evaluate(f, schema);
    os << n << ',' << k << ',' << b << ',' << lcgd::format_double(l) << ','
       << lcgd::format_double(r.rmse) << ',' << lcgd::format_double(r.maxse)
       << ',' << lcgd::format_double(r.sens) << "\n";
  }
  return 0;
}

int cmd_ratio_normalized(int n, int b, const std::string& k_list, int grid,
                         const std::string& out_path) {
  CsvSink sink(out_path);
  std::ostream& os = sink.stream();
  os << "# schema: lcgd.ratio-normalized.v1\n";
  os << "n,k,b,lambda,ratio\n";
  for (int k : parse_int_list(k_list)) {
    for (int t = 1; t <= grid; ++t) {
      const double l = static_cast<double>(t) / (grid + 1);
      os << n << ',' << k << ',' << b << ',' << lcgd::format_double(l) << ','
         << lcgd::format_double(lcgd::normalized_rmse_ratio(n, k, b, l))
         << "\n";
    }
  }
  return 0;
}

int cmd_bench_noise(int d, int steps, const std::string& mode, double lambda,
                    int p, const std::string& coeffs, std::uint64_t seed,
                    const std::string& out_path) {
  lcgd::NoiseStreamConfig config;
  if (mode == "independent") {
    config = lcgd::NoiseStreamConfig::independent(d, 1.0, seed);
  } else if (mode == "lambda") {
    config = lcgd::NoiseStreamConfig::lambda_cancel(lambda, d, 1.0, seed);
  } else if (mode == "banded") {
    std::vector<double> c;
    if (!coeffs.empty()) {
      c = parse_list(coeffs);
      if (p > 0 && p != static_cast<int>(c.size())) {
        throw std::invalid_argument("--p disagrees with --coeffs length");
      }
    } else {
      // default alternating geometric taps: 1, -1/2, 1/4, ...
      if (p < 1) throw std::invalid_argument("banded mode needs --p or --coeffs");
      c.resize(static_cast<std::size_t>(p));
      c[0] = 1.0;
      for (int t = 1; t < p; ++t) c[t] = -0.5 * c[t - 1];
    }
    config = lcgd::NoiseStreamConfig::banded_inverse(c, d, 1.0, seed);
  } else {
    throw std::invalid_argument("unknown mode '" + mode + "'");
  }
  lcgd::NoiseStream stream(config);
  double sink_value = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < steps; ++i) {
    sink_value += stream.next_noise()[0];
  }
  const auto stop = std::chrono::steady_clock::now();
  const double ns_per_step =
      std::chrono::duration<double, std::nano>(stop - start).count() / steps;
  const lcgd::DrawAccounting acc = lcgd::draw_accounting(stream);

  CsvSink sink(out_path);
  std::ostream& os = sink.stream();
  os << "# schema: lcgd.bench-noise.v1\n";
  os << "mode,p,d,ns_per_step,fresh,regenerated\n";
  os << mode << ',' << config.bandwidth() << ',' << d << ','
     << lcgd::format_double(ns_per_step) << ',' << acc.fresh_blocks << ','
     << acc.regenerated_blocks << "\n";
  if (sink_value == 0.12345) std::cerr << "";  // keep the loop observable
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& trace_path,
              std::optional<double> lambda, std::optional<double> epsilon,
              std::optional<double> delta, std::optional<std::uint64_t> seed,
              std::optional<double> eta) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open " + config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  lcgd::TrainConfig config = lcgd::train_config_from_json(buf.str());
  if (lambda) config.lambda = *lambda;
  if (epsilon || delta) {
    config.budget =
        lcgd::PrivacyBudget(epsilon.value_or(config.budget.epsilon),
                            delta.value_or(config.budget.delta));
  }
  if (seed) config.seed = *seed;
  if (eta) config.learning_rate = *eta;

  const lcgd::TrainResult result = lcgd::train(config);

  const std::string resolved = resolve_out(trace_path);
  std::ofstream trace(resolved);
  if (!trace) throw std::runtime_error("cannot open " + resolved);
  lcgd::write_trace(trace, config, result);

  json out;
  out["final_loss"] = result.final_loss;
  out["sens"] = result.scale.sens;
  out["sigma_multiplier"] = result.scale.sigma_multiplier;
  out["noise_total"] = result.scale.total;
  out["schema_b"] = result.schema_b;
  out["steps"] = result.trace.steps.size();
  out["trace"] = resolved;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_test_vectors(const std::string& emit_path,
                     const std::string& check_path, const std::string& mode,
                     int d, int steps, std::uint64_t seed, double lambda,
                     const std::string& coeffs, double scale) {
  if (!check_path.empty()) {
    std::ifstream in(check_path);
    if (!in) throw std::runtime_error("cannot open " + check_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const lcgd::VectorCheck check = lcgd::check_test_vectors(buf.str());
    json out;
    out["ok"] = check.ok;
    out["detail"] = check.detail;
    std::cout << out.dump(2) << "\n";
    return check.ok ? 0 : 1;
  }
  lcgd::NoiseStreamConfig config;
  if (mode == "independent") {
    config = lcgd::NoiseStreamConfig::independent(d, scale, seed);
  } else if (mode == "lambda") {
    config = lcgd::NoiseStreamConfig::lambda_cancel(lambda, d, scale, seed);
  } else if (mode == "banded") {
    config = lcgd::NoiseStreamConfig::banded_inverse(parse_list(coeffs), d,
                                                     scale, seed);
  } else {
    throw std::invalid_argument("unknown mode '" + mode + "'");
  }
  const std::string resolved = resolve_out(emit_path);
  std::ofstream out(resolved);
  if (!out) throw std::runtime_error("cannot open " + resolved);
  out << lcgd::emit_test_vectors(config, steps);
  std::cout << "{\"written\": \"" << resolved << "\"}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlated-noise differential privacy toolkit"};
  app.require_subcommand(1);

  // sens
  int s_n = 8, s_k = 1, s_b = 1;
  double s_lambda = 0.0;
  bool s_normalized = false;
  std::int64_t s_budget = 1'000'000;
  auto* sens = app.add_subcommand(
      "sens", "Min-separation sensitivity: structural, closed form, and "
              "brute force (n <= 24)");
  sens->add_option("--n", s_n, "Iterations")->required();
  sens->add_option("--k", s_k, "Max participations")->required();
  sens->add_option("--b", s_b, "Min separation")->required();
  sens->add_option("--lambda", s_lambda, "Correlation parameter in [0,1)")
      ->required();
  sens->add_flag("--normalized", s_normalized, "Column-normalized strategy");
  sens->add_option("--brute-budget", s_budget, "Enumeration node budget");

  // bounds
  int b_n = 1;
  auto* bounds =
      app.add_subcommand("bounds", "Full-batch RMSE landmarks and ratios");
  bounds->add_option("--n", b_n, "Iterations")->required();

  // sweep-lambda
  int sw_n = 64, sw_k = 1, sw_b = 64, sw_grid = 512;
  std::string sw_metric = "rmse", sw_out;
  bool sw_json = false;
  auto* sweep = app.add_subcommand(
      "sweep-lambda", "Metric sweep over the lambda grid; prints lambda*");
  sweep->add_option("--n", sw_n, "Iterations")->required();
  sweep->add_option("--k", sw_k, "Max participations")->required();
  sweep->add_option("--b", sw_b, "Min separation")->required();
  sweep->add_option("--metric", sw_metric, "rmse|maxse")
      ->check(CLI::IsMember({"rmse", "maxse"}));
  sweep->add_option("--grid", sw_grid, "Grid resolution (default 512)");
  sweep->add_flag("--json", sw_json, "Emit JSON-lines records instead of CSV");
  sweep->add_option("--out", sw_out, "CSV output path (default stdout)");

  // rmse-table
  int rt_n = 64, rt_k = 1, rt_b = 64;
  std::string rt_lambdas = "0.5,0.9,0.95", rt_out;
  bool rt_normalized = false;
  auto* table = app.add_subcommand(
      "rmse-table", "Metric table for explicit lambda values");
  table->add_option("--n", rt_n, "Iterations")->required();
  table->add_option("--k", rt_k, "Max participations")->required();
  table->add_option("--b", rt_b, "Min separation")->required();
  table->add_option("--lambda-list", rt_lambdas, "Comma-separated lambdas");
  table->add_flag("--normalized", rt_normalized,
                  "Column-normalized factorization");
  table->add_option("--out", rt_out, "CSV output path (default stdout)");

  // ratio-normalized
  int rn_n = 64, rn_b = 8, rn_grid = 19;
  std::string rn_klist = "1,2,4,8", rn_out;
  auto* ratio = app.add_subcommand(
      "ratio-normalized", "Normalized/plain RMSE ratio grid");
  ratio->add_option("--n", rn_n, "Iterations")->required();
  ratio->add_option("--b", rn_b, "Min separation")->required();
  ratio->add_option("--k-list", rn_klist, "Comma-separated k values");
  ratio->add_option("--lambda-grid", rn_grid,
                    "Interior lambda grid resolution (default 19)");
  ratio->add_option("--out", rn_out, "CSV output path (default stdout)");

  // bench-noise
  int bn_d = 4096, bn_steps = 1000, bn_p = 0;
  std::string bn_mode = "lambda", bn_coeffs, bn_out;
  double bn_lambda = 0.9;
  std::uint64_t bn_seed = 0;
  auto* bench = app.add_subcommand(
      "bench-noise", "Per-step noise timing and draw accounting");
  bench->add_option("--d", bn_d, "Noise dimension");
  bench->add_option("--steps", bn_steps, "Steps to run");
  bench->add_option("--mode", bn_mode, "independent|lambda|banded")
      ->check(CLI::IsMember({"independent", "lambda", "banded"}));
  bench->add_option("--lambda", bn_lambda, "Lambda for lambda mode");
  bench->add_option("--p", bn_p, "Bandwidth for banded mode (default taps)");
  bench->add_option("--coeffs", bn_coeffs, "Explicit coefficients for banded mode");
  bench->add_option("--seed", bn_seed, "Stream seed");
  bench->add_option("--out", bn_out, "CSV output path (default stdout)");

  // train
  std::string tr_config, tr_out = "train_trace.jsonl";
  double tr_lambda = -1.0, tr_eps = -1.0, tr_delta = -1.0, tr_eta = -1.0;
  std::uint64_t tr_seed = 0;
  bool tr_seed_set = false;
  auto* train_cmd = app.add_subcommand(
      "train", "Run the correlated-noise trainer from a JSON config");
  train_cmd->add_option("--config", tr_config, "Config JSON path")->required();
  train_cmd->add_option("--out", tr_out, "Trace output path");
  auto* opt_lambda =
      train_cmd->add_option("--lambda", tr_lambda, "Override lambda");
  auto* opt_eps =
      train_cmd->add_option("--epsilon", tr_eps, "Override epsilon");
  auto* opt_delta = train_cmd->add_option("--delta", tr_delta, "Override delta");
  auto* opt_eta = train_cmd->add_option("--eta", tr_eta, "Override step size");
  train_cmd->add_option("--seed", tr_seed, "Override seed")
      ->each([&](const std::string&) { tr_seed_set = true; });

  // test-vectors
  std::string tv_emit, tv_check, tv_mode = "lambda", tv_coeffs = "1,-0.5";
  int tv_d = 3, tv_steps = 8;
  std::uint64_t tv_seed = 0;
  double tv_lambda = 0.7, tv_scale = 1.0;
  auto* vectors = app.add_subcommand(
      "test-vectors", "Emit or check stream test-vector files");
  auto* emit_opt = vectors->add_option("--emit", tv_emit, "Write vectors here");
  auto* check_opt =
      vectors->add_option("--check", tv_check, "Verify this vector file");
  emit_opt->excludes(check_opt);
  vectors->add_option("--mode", tv_mode, "independent|lambda|banded");
  vectors->add_option("--d", tv_d, "Dimension");
  vectors->add_option("--steps", tv_steps, "Steps");
  vectors->add_option("--seed", tv_seed, "Seed");
  vectors->add_option("--lambda", tv_lambda, "Lambda for lambda mode");
  vectors->add_option("--coeffs", tv_coeffs, "Coefficients for banded mode");
  vectors->add_option("--scale", tv_scale, "Stream scale");

  try {
    app.parse(argc, argv);
    if (sens->parsed()) {
      return cmd_sens(s_n, s_k, s_b, s_lambda, s_normalized, s_budget);
    }
    if (bounds->parsed()) return cmd_bounds(b_n);
    if (sweep->parsed()) {
      return cmd_sweep_lambda(sw_n, sw_k, sw_b, sw_metric, sw_grid, sw_json,
                              sw_out);
    }
    if (table->parsed()) {
      return cmd_rmse_table(rt_n, rt_k, rt_b, rt_lambdas, rt_normalized,
                            rt_out);
    }
    if (ratio->parsed()) {
      return cmd_ratio_normalized(rn_n, rn_b, rn_klist, rn_grid, rn_out);
    }
    if (bench->parsed()) {
      return cmd_bench_noise(bn_d, bn_steps, bn_mode, bn_lambda, bn_p,
                             bn_coeffs, bn_seed, bn_out);
    }
    if (train_cmd->parsed()) {
      return cmd_train(
          tr_config, tr_out,
          opt_lambda->count() ? std::optional<double>(tr_lambda) : std::nullopt,
          opt_eps->count() ? std::optional<double>(tr_eps) : std::nullopt,
          opt_delta->count() ? std::optional<double>(tr_delta) : std::nullopt,
          tr_seed_set ? std::optional<std::uint64_t>(tr_seed) : std::nullopt,
          opt_eta->count() ? std::optional<double>(tr_eta) : std::nullopt);
    }
    if (vectors->parsed()) {
      if (tv_emit.empty() && tv_check.empty()) {
        std::cerr << "test-vectors: need --emit or --check\n";
        return 2;
      }
      return cmd_test_vectors(tv_emit, tv_check, tv_mode, tv_d, tv_steps,
                              tv_seed, tv_lambda, tv_coeffs, tv_scale);
    }
    std::cerr << app.help();
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
