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

#include "lcgd/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "lcgd/matrix.hpp"
#include "lcgd/noise.hpp"
#include "lcgd/numeric.hpp"

namespace lcgd {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string to_json(const LttMatrix& m) {
  json j;
  j["n"] = m.order();
  j["first_col"] = m.first_col();
  return j.dump();
}

std::string to_json(const LowerTriMatrix& m) {
  json j;
  j["n"] = m.order();
  json rows = json::array();
  for (int i = 0; i < m.order(); ++i) {
    const auto row = m.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

namespace {

json mode_to_json(const NoiseStreamConfig& config) {
  json mode;
  switch (config.kind) {
    case NoiseStreamConfig::Kind::kIndependent:
      mode["kind"] = "independent";
      break;
    case NoiseStreamConfig::Kind::kLambdaCancel:
      mode["kind"] = "lambda_cancel";
      mode["lambda"] = config.lambda;
      break;
    case NoiseStreamConfig::Kind::kBandedInverse:
      mode["kind"] = "banded_inverse";
      mode["coeffs"] = config.coeffs;
      break;
  }
  mode["scale"] = config.scale;
  return mode;
}

NoiseStreamConfig mode_from_json(const json& j) {
  const json& mode = j.at("mode");
  const int d = j.at("d").get<int>();
  const auto seed = j.at("seed").get<std::uint64_t>();
  const double scale = mode.value("scale", 1.0);
  const std::string kind = mode.at("kind").get<std::string>();
  if (kind == "independent") {
    return NoiseStreamConfig::independent(d, scale, seed);
  }
  if (kind == "lambda_cancel") {
    return NoiseStreamConfig::lambda_cancel(mode.at("lambda").get<double>(), d,
                                            scale, seed);
  }
  if (kind == "banded_inverse") {
    return NoiseStreamConfig::banded_inverse(
        mode.at("coeffs").get<std::vector<double>>(), d, scale, seed);
  }
  throw std::invalid_argument("test vectors: unknown mode kind '" + kind + "'");
}

bool bitwise_equal(double a, double b) {
  std::uint64_t ua, ub;
  std::memcpy(&ua, &a, sizeof(ua));
  std::memcpy(&ub, &b, sizeof(ub));
  return ua == ub;
}

}  // namespace

std::string emit_test_vectors(const NoiseStreamConfig& config, int steps) {
  json j;
  j["seed"] = config.seed;
  j["mode"] = mode_to_json(config);
  j["d"] = config.dim;
  j["steps"] = steps;
  j["outputs"] = buffered_reference(config, steps);
  return j.dump(2) + "\n";
}

VectorCheck check_test_vectors(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    return VectorCheck{false, std::string("parse error: ") + e.what()};
  }
  NoiseStreamConfig config = mode_from_json(j);
  const int steps = j.at("steps").get<int>();
  const auto expected = j.at("outputs").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(expected.size()) != steps) {
    return VectorCheck{false, "outputs row count does not match steps"};
  }
  NoiseStream stream(config);
  for (int i = 0; i < steps; ++i) {
    const std::vector<double> got = stream.next_noise();
    if (expected[i].size() != got.size()) {
      return VectorCheck{false, "row " + std::to_string(i) + ": wrong width"};
    }
    for (std::size_t t = 0; t < got.size(); ++t) {
      if (!bitwise_equal(got[t], expected[i][t])) {
        return VectorCheck{false, "mismatch at step " + std::to_string(i + 1) +
                                      " component " + std::to_string(t)};
      }
    }
  }
  return VectorCheck{true, "bit-exact over " + std::to_string(steps) + " steps"};
}

namespace {

json theta0_to_json(const Theta0Spec& t) {
  json j;
  j["kind"] = t.kind == Theta0Spec::Kind::kZeros ? "zeros" : "gaussian";
  if (t.kind == Theta0Spec::Kind::kGaussian) {
    j["stddev"] = t.stddev;
    j["seed"] = t.seed;
  }
  return j;
}

Theta0Spec theta0_from_json(const json& j) {
  Theta0Spec t;
  const std::string kind = j.value("kind", "zeros");
  if (kind == "zeros") {
    t.kind = Theta0Spec::Kind::kZeros;
  } else if (kind == "gaussian") {
    t.kind = Theta0Spec::Kind::kGaussian;
    t.stddev = j.value("stddev", 1.0);
    t.seed = j.value("seed", std::uint64_t{0});
  } else {
    throw std::invalid_argument("train config: unknown theta0 kind '" + kind +
                                "'");
  }
  return t;
}

json task_to_json(const SynthTaskConfig& t) {
  json j;
  j["kind"] = t.kind == TaskKind::kLinReg ? "linreg" : "logreg";
  j["dim"] = t.dim;
  j["dataset_size"] = t.dataset_size;
  j["seed"] = t.seed;
  if (t.kind == TaskKind::kLinReg) j["label_noise"] = t.label_noise;
  return j;
}

SynthTaskConfig task_from_json(const json& j) {
  SynthTaskConfig t;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linreg") {
    t.kind = TaskKind::kLinReg;
  } else if (kind == "logreg") {
    t.kind = TaskKind::kLogReg;
  } else {
    throw std::invalid_argument("train config: unknown task kind '" + kind +
                                "'");
  }
  t.dim = j.at("dim").get<int>();
  t.dataset_size = j.at("dataset_size").get<int>();
  t.seed = j.value("seed", std::uint64_t{0});
  t.label_noise = j.value("label_noise", 0.1);
  return t;
}

}  // namespace

TrainConfig train_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  TrainConfig c;
  if (j.contains("theta0")) c.theta0 = theta0_from_json(j.at("theta0"));
  c.batch_size = j.at("batch_size").get<int>();
  c.clip_norm = j.at("clip_norm").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.iterations = j.at("iterations").get<int>();
  if (j.contains("budget")) {
    c.budget = PrivacyBudget(j.at("budget").at("epsilon").get<double>(),
                             j.at("budget").at("delta").get<double>());
  }
  if (j.contains("sigma_multiplier_override")) {
    c.sigma_multiplier_override =
        j.at("sigma_multiplier_override").get<double>();
  }
  const std::string batching = j.value("batching", "sequential");
  if (batching == "sequential") {
    c.batching = Batching::kSequential;
  } else if (batching == "balls_in_bins") {
    c.batching = Batching::kBallsInBins;
  } else {
    throw std::invalid_argument("train config: unknown batching '" + batching +
                                "'");
  }
  const std::string amp = j.value("amplification", "none");
  if (amp == "none") {
    c.amplification = Amplification::kNone;
  } else if (amp == "bnb") {
    c.amplification = Amplification::kBallsInBins;
  } else {
    throw std::invalid_argument("train config: unknown amplification '" + amp +
                                "'");
  }
  c.seed = j.value("seed", std::uint64_t{0});
  c.task = task_from_json(j.at("task"));
  return c;
}

std::string train_config_to_json(const TrainConfig& config) {
  json j;
  j["theta0"] = theta0_to_json(config.theta0);
  j["batch_size"] = config.batch_size;
  j["clip_norm"] = config.clip_norm;
  j["learning_rate"] = config.learning_rate;
  j["lambda"] = config.lambda;
  j["epochs"] = config.epochs;
  j["iterations"] = config.iterations;
  j["budget"] = {{"epsilon", config.budget.epsilon},
                 {"delta", config.budget.delta}};
  if (config.sigma_multiplier_override) {
    j["sigma_multiplier_override"] = *config.sigma_multiplier_override;
  }
  j["batching"] = config.batching == Batching::kSequential ? "sequential"
                                                           : "balls_in_bins";
  j["amplification"] =
      config.amplification == Amplification::kNone ? "none" : "bnb";
  j["seed"] = config.seed;
  j["task"] = task_to_json(config.task);
  return j.dump();
}

void write_trace(std::ostream& out, const TrainConfig& config,
                 const TrainResult& result) {
  json header;
  header["config"] = json::parse(train_config_to_json(config));
  header["sens"] = result.scale.sens;
  header["sigma_multiplier"] = result.scale.sigma_multiplier;
  header["schema_b"] = result.schema_b;
  out << header.dump() << "\n";
  char hashbuf[32];
  for (std::size_t i = 0; i < result.trace.steps.size(); ++i) {
    const StepRecord& r = result.trace.steps[i];
    json line;
    line["step"] = i + 1;
    line["x"] = r.clipped_sum;
    line["noise"] = r.noise;
    std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                  static_cast<unsigned long long>(r.theta_hash));
    line["theta_hash"] = hashbuf;
    out << line.dump() << "\n";
  }
  json footer;
  footer["theta_n"] = result.trace.theta_n;
  footer["final_loss"] = result.final_loss;
  footer["noise_total"] = result.scale.total;
  out << footer.dump() << "\n";
}

}  // namespace lcgd
