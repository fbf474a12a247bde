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

#ifndef LCGD_TRAINER_HPP_
#define LCGD_TRAINER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcgd/calibration.hpp"
#include "lcgd/noise.hpp"

namespace lcgd {

enum class TaskKind { kLinReg, kLogReg };

struct SynthTaskConfig {
  TaskKind kind = TaskKind::kLinReg;
  int dim = 8;
  int dataset_size = 1024;
  std::uint64_t seed = 0;
  double label_noise = 0.1;  // linreg label perturbation
};

// Deterministic synthetic regression/classification task with exact
// closed-form gradients (so finite-difference checks apply).
class SynthTask {
 public:
  explicit SynthTask(const SynthTaskConfig& config);

  TaskKind kind() const { return config_.kind; }
  int dim() const { return config_.dim; }
  int size() const { return config_.dataset_size; }
  const std::vector<double>& ground_truth() const { return w_star_; }

  std::span<const double> example(int idx) const;
  double label(int idx) const { return labels_[static_cast<std::size_t>(idx)]; }

  double example_loss(std::span<const double> theta, int idx) const;
  // out must have dim() elements.
  void example_gradient(std::span<const double> theta, int idx,
                        std::span<double> out) const;
  double mean_loss(std::span<const double> theta) const;

 private:
  SynthTaskConfig config_;
  std::vector<double> features_;  // row-major dataset_size x dim
  std::vector<double> labels_;
  std::vector<double> w_star_;
};

SynthTask synth_task(const SynthTaskConfig& config);

enum class Batching { kBallsInBins, kSequential };
enum class Amplification { kNone, kBallsInBins };

struct Theta0Spec {
  enum class Kind { kZeros, kGaussian };
  Kind kind = Kind::kZeros;
  double stddev = 1.0;
  std::uint64_t seed = 0;
};

// Per-epoch batch assignment; reused across all epochs.
struct BatchPlan {
  std::vector<int> assignment;  // data index -> batch index
  int batches_per_epoch = 1;

  std::vector<int> batch_members(int batch_index) const;
};

struct TrainConfig {
  Theta0Spec theta0;
  int batch_size = 16;
  double clip_norm = 1.0;
  double learning_rate = 0.05;
  double lambda = 0.0;
  int epochs = 1;
  int iterations = 64;
  PrivacyBudget budget{1.0, 1e-5};
  // Replaces the Gaussian multiplier when set; 0 gives noiseless runs for
  // the budget -> infinity limit used in tests.
  std::optional<double> sigma_multiplier_override;
  Batching batching = Batching::kSequential;
  Amplification amplification = Amplification::kNone;
  std::uint64_t seed = 0;
  SynthTaskConfig task;

  int batches_per_epoch() const { return task.dataset_size / batch_size; }

  // Enforces batch divisibility, iterations == epochs * batches_per_epoch,
  // parameter ranges, and rejects the amplified accountant via its stub.
  void validate() const;
};

struct StepRecord {
  std::vector<double> clipped_sum;  // x_i
  std::vector<double> noise;        // nu_i
  std::uint64_t theta_hash;         // FNV-1a of theta_i
};

struct TrainTrace {
  std::vector<StepRecord> steps;
  std::vector<double> theta_n;
};

struct TrainResult {
  std::vector<double> theta;
  TrainTrace trace;
  NoiseScale scale;
  double final_loss = 0.0;
  int schema_b = 1;  // derived min separation (batches per epoch)
};

// min(1, zeta/||g||) * g, nudged down by an ulp if rounding pushed the
// product past zeta; the returned norm never exceeds zeta.
std::vector<double> clip(std::span<const double> g, double zeta);

// Uniform independent bin per data point; deterministic in rng_seed.
// Bins may be empty.
BatchPlan allocate_balls_in_bins(int dataset_size, int batches_per_epoch,
                                 std::uint64_t rng_seed);

// Contiguous wrap-around slice {(i-1)B, ..., iB-1} mod dataset_size for
// 1-based step i.
std::vector<int> sequential_batches(int dataset_size, int batch_size, int step);

// Runs the correlated-noise training loop end to end: per-example
// clipping, noise scaled to the strategy sensitivity, lambda-cancel
// correlated Gaussian noise, constant-step updates
//   theta_i = theta_{i-1} - (eta/B)(x_i + nu_i).
TrainResult train(const TrainConfig& config);

}  // namespace lcgd

#endif  // LCGD_TRAINER_HPP_
