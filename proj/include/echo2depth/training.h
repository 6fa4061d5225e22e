// Copyright 2026 The echo2depth Authors
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

#ifndef ECHO2DEPTH_TRAINING_H_
#define ECHO2DEPTH_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "echo2depth/dataset_store.h"
#include "echo2depth/keyvalue.h"
#include "echo2depth/models.h"
#include "echo2depth/nn/checkpoint.h"
#include "echo2depth/nn/optim.h"

namespace echo2depth::training {

using nn::Tensor;

enum class Regime { kGenOnly, kGan };
enum class Target { kDepth, kGray };

const char* name(Regime regime);
const char* name(Target target);
Regime parse_regime(std::string_view text);
Target parse_target(std::string_view text);

struct TrainConfig {
  Regime regime = Regime::kGenOnly;
  Target target = Target::kDepth;
  models::ModelConfig model;
  int batch_size = 16;
  int epochs = 50;
  long max_steps = 0;  // stop after this many updates; 0 = no limit
  std::uint64_t seed = 0;
  nn::AdamOptions generator_adam;
  nn::AdamOptions discriminator_adam;
  double lambda = 100.0;
  bool jitter = true;
  std::string warm_start;  // generator checkpoint to start from (gan)

  // Adam defaults for the regime: lr 1e-4, betas (0.9, 0.999) without a
  // discriminator; lr 2e-4, betas (0.5, 0.999) with one.
  static TrainConfig defaults(Regime regime);
};

void validate(const TrainConfig& config);
// Keys: regime, target, batch_size, epochs, max_steps, seed, lr, beta1,
// beta2, lambda, jitter, warm_start, plus the model keys.
TrainConfig read_train_config(const KeyValueFile& in);
KeyValueFile write_train_config(const TrainConfig& config);

// Loss value with its gradient with respect to each input.
template <typename T>
struct Loss {
  double value = 0.0;
  Tensor<T> grad;
};

template <typename T>
Loss<T> l1_loss(const Tensor<T>& prediction, const Tensor<T>& target);

template <typename T>
struct DiscriminatorLoss {
  double value = 0.0;
  Tensor<T> grad_real;
  Tensor<T> grad_fake;
};

// mean((1 - real)^2) + mean(fake^2)
template <typename T>
DiscriminatorLoss<T> lsgan_d_loss(const Tensor<T>& real, const Tensor<T>& fake);
// mean((1 - fake)^2)
template <typename T>
Loss<T> lsgan_g_loss(const Tensor<T>& fake);

struct StepLog {
  long step = 0;
  double l1 = 0.0;
  double gan_g = 0.0;
  double gan_d = 0.0;
  double total_g = 0.0;  // gan_g + lambda * l1 (just l1 without a discriminator)
};

struct EpochLog {
  int epoch = 0;
  double train_l1 = 0.0;
  double val_l1 = 0.0;
};

// Owns the networks and optimizers for one configuration.
class Trainer {
 public:
  explicit Trainer(TrainConfig config);

  const TrainConfig& config() const { return config_; }
  models::Sequential<float>& generator() { return *generator_; }
  models::Sequential<float>* discriminator() { return discriminator_.get(); }
  const nn::ParameterList<float>& generator_parameters() const { return g_params_; }
  const nn::ParameterList<float>& discriminator_parameters() const {
    return d_params_;
  }

  // One optimizer update on a batch (for GAN: a discriminator step, then a
  // generator step).
  StepLog step(const Tensor<float>& input, const Tensor<float>& target);

  // Discriminator update minimizing half of the LSGAN discriminator loss;
  // returns the full loss before the update.
  double discriminator_step(const Tensor<float>& real, const Tensor<float>& fake);

  // Fills generator gradients for the objective of the current regime without
  // updating. Returns the loss terms; `fake` receives the generated batch.
  StepLog generator_gradients(const Tensor<float>& input, const Tensor<float>& target,
                              Tensor<float>* fake = nullptr);

  Tensor<float> predict(const Tensor<float>& input);  // inference mode

  nn::Checkpoint checkpoint() const;
  void load(const nn::Checkpoint& checkpoint);

  long steps() const { return steps_; }

 private:
  // Gradients of the regime objective for an already computed train-mode
  // prediction.
  StepLog backprop_generator(const Tensor<float>& pred, const Tensor<float>& target);

  TrainConfig config_;
  std::unique_ptr<models::Sequential<float>> generator_;
  std::unique_ptr<models::Sequential<float>> discriminator_;
  nn::ParameterList<float> g_params_;
  nn::ParameterList<float> d_params_;
  std::unique_ptr<nn::Adam<float>> g_opt_;
  std::unique_ptr<nn::Adam<float>> d_opt_;
  long steps_ = 0;
};

// Target image of a record at a resolution (box-downsampled when the stored
// image is larger).
signal::SquareImage target_image(const data::SampleRecord& record, Target target,
                                 int resolution);

// Batch assembly. With `rng` set, each clip is re-windowed by jitter_window
// from a zero-padded copy.
struct Batch {
  Tensor<float> input;
  Tensor<float> target;
};
Batch make_batch(std::span<const data::SampleRecord> records,
                 std::span<const std::size_t> indices, const TrainConfig& config,
                 std::mt19937_64* jitter_rng);

// Mean absolute error of the model on `records` in inference mode.
double evaluate_l1(Trainer& trainer, std::span<const data::SampleRecord> records,
                   int batch_size = 16);

struct TrainResult {
  std::vector<StepLog> steps;
  std::vector<EpochLog> epochs;
  int best_epoch = 0;
  double best_val_l1 = 0.0;
  std::filesystem::path checkpoint;  // best-val checkpoint
};

// Full training run. Writes loss.csv (step, l1, gan_g, gan_d, total_g),
// epochs.csv (epoch, train_l1, val_l1), config.txt and best.ckpt under
// `out_dir`. Selection uses val L1, or train L1 when `val` is empty.
TrainResult train(const TrainConfig& config,
                  std::span<const data::SampleRecord> train_split,
                  std::span<const data::SampleRecord> val_split,
                  const std::filesystem::path& out_dir);

TrainResult train_generator_only(const TrainConfig& config,
                                 std::span<const data::SampleRecord> train_split,
                                 std::span<const data::SampleRecord> val_split,
                                 const std::filesystem::path& out_dir);
TrainResult train_gan(const TrainConfig& config,
                      std::span<const data::SampleRecord> train_split,
                      std::span<const data::SampleRecord> val_split,
                      const std::filesystem::path& out_dir);

// Pixel-wise mean of the training targets.
signal::SquareImage baseline_mean(std::span<const data::SampleRecord> train_split,
                                  Target target, int resolution);
// Independent U[0, 1) pixels.
signal::SquareImage baseline_random(int resolution, std::mt19937_64& rng);
// E|U - c| = c^2 - c + 1/2 averaged over every pixel of `images`.
double random_baseline_expectation(std::span<const signal::SquareImage> images);

double mean_abs_error(const signal::SquareImage& a, const signal::SquareImage& b);

}  // namespace echo2depth::training

#endif  // ECHO2DEPTH_TRAINING_H_
