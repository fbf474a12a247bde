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

#include "lcgd/trainer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcgd/numeric.hpp"
#include "lcgd/philox.hpp"

namespace lcgd {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Distinct sub-streams of the run seed; the noise stream uses the seed
// itself, auxiliary draws use fixed xors so they never collide.
constexpr std::uint64_t kBatchSeedSalt = 0x9e3779b97f4a7c15ull;

double stable_logistic_loss(double margin) {
  // log(1 + exp(-margin)) without overflow on either tail.
  if (margin > 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

}  // namespace

SynthTask::SynthTask(const SynthTaskConfig& config) : config_(config) {
  require(config_.dim >= 1, "synth_task: dim must be positive");
  require(config_.dataset_size >= 1, "synth_task: dataset_size must be positive");
  const int d = config_.dim;
  const int n = config_.dataset_size;

  PrngState gen{config_.seed, Counter128{}};
  w_star_.resize(static_cast<std::size_t>(d));
  gaussian_block_fill(gen, w_star_);
  features_.resize(static_cast<std::size_t>(n) * d);
  gaussian_block_fill(gen, features_);

  labels_.resize(static_cast<std::size_t>(n));
  std::vector<double> label_noise(static_cast<std::size_t>(n));
  gaussian_block_fill(gen, label_noise);
  for (int i = 0; i < n; ++i) {
    const double margin = dot(example(i), w_star_);
    if (config_.kind == TaskKind::kLinReg) {
      labels_[i] = margin + config_.label_noise * label_noise[i];
    } else {
      labels_[i] = margin >= 0.0 ? 1.0 : -1.0;
    }
  }
}

std::span<const double> SynthTask::example(int idx) const {
  return {features_.data() + static_cast<std::size_t>(idx) * config_.dim,
          static_cast<std::size_t>(config_.dim)};
}

double SynthTask::example_loss(std::span<const double> theta, int idx) const {
  const double pred = dot(example(idx), theta);
  if (config_.kind == TaskKind::kLinReg) {
    const double r = pred - labels_[static_cast<std::size_t>(idx)];
    return 0.5 * r * r;
  }
  return stable_logistic_loss(labels_[static_cast<std::size_t>(idx)] * pred);
}

void SynthTask::example_gradient(std::span<const double> theta, int idx,
                                 std::span<double> out) const {
  const std::span<const double> x = example(idx);
  const double pred = dot(x, theta);
  const double y = labels_[static_cast<std::size_t>(idx)];
  double coeff;
  if (config_.kind == TaskKind::kLinReg) {
    coeff = pred - y;
  } else {
    // d/dtheta log(1 + exp(-y <theta, x>)) = -y x sigmoid(-y <theta, x>)
    coeff = -y / (1.0 + std::exp(y * pred));
  }
  for (int t = 0; t < config_.dim; ++t) out[t] = coeff * x[t];
}

double SynthTask::mean_loss(std::span<const double> theta) const {
  KahanSum acc;
  for (int i = 0; i < size(); ++i) acc.add(example_loss(theta, i));
  return acc.value() / size();
}

SynthTask synth_task(const SynthTaskConfig& config) { return SynthTask(config); }

std::vector<int> BatchPlan::batch_members(int batch_index) const {
  std::vector<int> members;
  for (int i = 0; i < static_cast<int>(assignment.size()); ++i) {
    if (assignment[i] == batch_index) members.push_back(i);
  }
  return members;
}

void TrainConfig::validate() const {
  require(batch_size >= 1, "train config: batch_size must be positive");
  require(batch_size <= task.dataset_size,
          "train config: batch_size exceeds dataset size");
  require(task.dataset_size % batch_size == 0,
          "train config: dataset size must be divisible by batch size");
  require(clip_norm > 0.0, "train config: clip_norm must be positive");
  require(learning_rate > 0.0, "train config: learning_rate must be positive");
  require(lambda >= 0.0 && lambda < 1.0, "train config: lambda in [0, 1)");
  require(epochs >= 1, "train config: epochs must be positive");
  require(iterations == epochs * batches_per_epoch(),
          "train config: iterations must equal epochs * (dataset/batch)");
  if (sigma_multiplier_override) {
    require(*sigma_multiplier_override >= 0.0,
            "train config: sigma override must be non-negative");
  }
  if (amplification == Amplification::kBallsInBins) {
    // Fails loudly with the stub's message.
    amplified_multiplier_stub(budget, make_c_lambda(iterations, lambda),
                              epochs);
  }
}

std::vector<double> clip(std::span<const double> g, double zeta) {
  require(zeta > 0.0, "clip: zeta must be positive");
  std::vector<double> out(g.begin(), g.end());
  const double n = norm(g);
  if (!std::isfinite(n)) throw std::invalid_argument("clip: non-finite input");
  if (n <= zeta) return out;
  const double s = zeta / n;
  for (double& x : out) x *= s;
  // One ulp of slack can survive the division; nudge until the bound is
  // met exactly.
  while (norm(out) > zeta) {
    for (double& x : out) x *= (1.0 - std::numeric_limits<double>::epsilon());
  }
  return out;
}

BatchPlan allocate_balls_in_bins(int dataset_size, int batches_per_epoch,
                                 std::uint64_t rng_seed) {
  require(dataset_size >= 1, "allocate_balls_in_bins: dataset_size >= 1");
  require(batches_per_epoch >= 1, "allocate_balls_in_bins: batches >= 1");
  BatchPlan plan;
  plan.batches_per_epoch = batches_per_epoch;
  plan.assignment.resize(static_cast<std::size_t>(dataset_size));
  const auto m = static_cast<std::uint64_t>(batches_per_epoch);
  for (int i = 0; i < dataset_size; ++i) {
    const std::uint64_t u =
        random_u64(rng_seed, Counter128{static_cast<std::uint64_t>(i), 0});
    plan.assignment[i] = static_cast<int>(u % m);
  }
  return plan;
}

std::vector<int> sequential_batches(int dataset_size, int batch_size,
                                    int step) {
  require(step >= 1, "sequential_batches: step is 1-based");
  require(dataset_size >= 1 && batch_size >= 1,
          "sequential_batches: sizes must be positive");
  std::vector<int> idx(static_cast<std::size_t>(batch_size));
  const std::int64_t start =
      static_cast<std::int64_t>(step - 1) * batch_size % dataset_size;
  for (int t = 0; t < batch_size; ++t) {
    idx[t] = static_cast<int>((start + t) % dataset_size);
  }
  return idx;
}

TrainResult train(const TrainConfig& config) {
  config.validate();
  const SynthTask task = synth_task(config.task);
  const int d = task.dim();
  const int n = config.iterations;
  const int bpe = config.batches_per_epoch();

  // Unamplified calibration: noise scales with the strategy sensitivity
  // under (n, k = epochs, b = batches per epoch).  Both batching modes
  // reuse the per-epoch assignment, so consecutive participations of one
  // data point are exactly bpe steps apart.
  const ParticipationSchema schema(n, config.epochs, bpe);
  const LttMatrix strategy = make_c_lambda(n, config.lambda);
  const double sens = sens_min_sep(strategy, schema);
  const double multiplier = config.sigma_multiplier_override
                                ? *config.sigma_multiplier_override
                                : gaussian_multiplier(config.budget);
  const NoiseScale scale{multiplier, sens, sens * multiplier};

  NoiseStream stream(NoiseStreamConfig::lambda_cancel(
      config.lambda, d, config.clip_norm * scale.total, config.seed));

  std::vector<double> theta(static_cast<std::size_t>(d), 0.0);
  if (config.theta0.kind == Theta0Spec::Kind::kGaussian) {
    PrngState init{config.theta0.seed, Counter128{}};
    gaussian_block_fill(init, theta);
    for (double& x : theta) x *= config.theta0.stddev;
  }

  BatchPlan plan;
  std::vector<std::vector<int>> bnb_batches;
  if (config.batching == Batching::kBallsInBins) {
    plan = allocate_balls_in_bins(task.size(), bpe,
                                  config.seed ^ kBatchSeedSalt);
    bnb_batches.resize(static_cast<std::size_t>(bpe));
    for (int i = 0; i < task.size(); ++i) {
      bnb_batches[plan.assignment[i]].push_back(i);
    }
  }

  const double lr_over_b = config.learning_rate / config.batch_size;
  TrainResult result;
  result.scale = scale;
  result.schema_b = bpe;
  result.trace.steps.reserve(static_cast<std::size_t>(n));

  std::vector<double> grad(static_cast<std::size_t>(d));
  for (int i = 1; i <= n; ++i) {
    std::vector<int> batch;
    if (config.batching == Batching::kSequential) {
      batch = sequential_batches(task.size(), config.batch_size, i);
    } else {
      batch = bnb_batches[(i - 1) % bpe];
    }

    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    for (int idx : batch) {
      task.example_gradient(theta, idx, grad);
      for (double g : grad) {
        if (!std::isfinite(g)) {
          throw std::runtime_error("train: non-finite gradient at step " +
                                   std::to_string(i));
        }
      }
      const std::vector<double> clipped = clip(grad, config.clip_norm);
      for (int t = 0; t < d; ++t) x[t] += clipped[t];
    }

    const std::vector<double> nu = stream.next_noise();
    for (int t = 0; t < d; ++t) theta[t] -= lr_over_b * (x[t] + nu[t]);

    result.trace.steps.push_back(
        StepRecord{std::move(x), nu, hash_doubles(theta)});
  }

  result.trace.theta_n = theta;
  result.final_loss = task.mean_loss(theta);
  result.theta = std::move(theta);
  return result;
}

}  // namespace lcgd
