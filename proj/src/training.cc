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

#include "echo2depth/training.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace echo2depth::training {
namespace fs = std::filesystem;
namespace {

constexpr const char* kRegimeNames[] = {"gen_only", "gan"};
constexpr const char* kTargetNames[] = {"depth", "gray"};

template <typename T>
void check_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* what) {
  require(a.shape() == b.shape(), ErrorCode::kInvalidArgument,
          std::string(what) + ": shape mismatch " + a.shape().str() + " vs " +
              b.shape().str());
  require(!a.empty(), ErrorCode::kInvalidArgument, std::string(what) + ": empty input");
}

std::string format_loss(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9g", v);
  return buffer;
}

void require_finite(const StepLog& log) {
  require(std::isfinite(log.l1) && std::isfinite(log.gan_g) &&
              std::isfinite(log.gan_d) && std::isfinite(log.total_g),
          ErrorCode::kNumerical,
          "non-finite loss at step " + std::to_string(log.step));
}

}  // namespace

const char* name(Regime regime) { return kRegimeNames[static_cast<int>(regime)]; }
const char* name(Target target) { return kTargetNames[static_cast<int>(target)]; }

Regime parse_regime(std::string_view text) {
  if (text == "gen_only") return Regime::kGenOnly;
  if (text == "gan") return Regime::kGan;
  throw Error(ErrorCode::kInvalidArgument, "unknown regime '" + std::string(text) + "'");
}

Target parse_target(std::string_view text) {
  if (text == "depth") return Target::kDepth;
  if (text == "gray" || text == "grayscale") return Target::kGray;
  throw Error(ErrorCode::kInvalidArgument, "unknown target '" + std::string(text) + "'");
}

TrainConfig TrainConfig::defaults(Regime regime) {
  TrainConfig c;
  c.regime = regime;
  if (regime == Regime::kGan) {
    c.generator_adam = {2e-4, 0.5, 0.999, 1e-8};
    c.discriminator_adam = {2e-4, 0.5, 0.999, 1e-8};
  } else {
    c.generator_adam = {1e-4, 0.9, 0.999, 1e-8};
    c.discriminator_adam = c.generator_adam;
  }
  return c;
}

void validate(const TrainConfig& c) {
  models::validate(c.model);
  require(c.batch_size >= 1, ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  require(c.epochs >= 1, ErrorCode::kInvalidArgument, "epochs must be >= 1");
  require(c.max_steps >= 0, ErrorCode::kInvalidArgument, "max_steps must be >= 0");
  require(c.generator_adam.learning_rate > 0 && c.discriminator_adam.learning_rate > 0,
          ErrorCode::kInvalidArgument, "learning rate must be positive");
  require(c.lambda >= 0, ErrorCode::kInvalidArgument, "lambda must be >= 0");
}

TrainConfig read_train_config(const KeyValueFile& in) {
  TrainConfig c = TrainConfig::defaults(parse_regime(in.get_or("regime", "gen_only")));
  c.target = parse_target(in.get_or("target", "depth"));
  c.model = models::read_model_config(in);
  c.batch_size = static_cast<int>(in.get_int_or("batch_size", c.batch_size));
  c.epochs = static_cast<int>(in.get_int_or("epochs", c.epochs));
  c.max_steps = in.get_int_or("max_steps", c.max_steps);
  c.seed = in.has("seed") ? in.get_uint("seed") : c.seed;
  for (auto* adam : {&c.generator_adam, &c.discriminator_adam}) {
    adam->learning_rate = in.get_double_or("lr", adam->learning_rate);
    adam->beta1 = in.get_double_or("beta1", adam->beta1);
    adam->beta2 = in.get_double_or("beta2", adam->beta2);
  }
  c.lambda = in.get_double_or("lambda", c.lambda);
  c.jitter = in.get_bool_or("jitter", c.jitter);
  c.warm_start = in.get_or("warm_start", "");
  validate(c);
  return c;
}

KeyValueFile write_train_config(const TrainConfig& c) {
  KeyValueFile out;
  out.set("regime", name(c.regime));
  out.set("target", name(c.target));
  models::write_config(c.model, out);
  out.set("batch_size", std::to_string(c.batch_size));
  out.set("epochs", std::to_string(c.epochs));
  out.set("max_steps", std::to_string(c.max_steps));
  out.set("seed", std::to_string(c.seed));
  out.set("lr", format_double(c.generator_adam.learning_rate));
  out.set("beta1", format_double(c.generator_adam.beta1));
  out.set("beta2", format_double(c.generator_adam.beta2));
  out.set("lambda", format_double(c.lambda));
  out.set("jitter", c.jitter ? "true" : "false");
  if (!c.warm_start.empty()) out.set("warm_start", c.warm_start);
  return out;
}

// ------------------------------------------------------------------ losses

template <typename T>
Loss<T> l1_loss(const Tensor<T>& prediction, const Tensor<T>& target) {
  check_same_shape(prediction, target, "l1_loss");
  Loss<T> out{0.0, Tensor<T>(prediction.shape())};
  const double inv = 1.0 / static_cast<double>(prediction.size());
  double sum = 0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double d = static_cast<double>(prediction[i]) - target[i];
    sum += std::abs(d);
    out.grad[i] = static_cast<T>(d > 0 ? inv : (d < 0 ? -inv : 0.0));
  }
  out.value = sum * inv;
  return out;
}

template <typename T>
DiscriminatorLoss<T> lsgan_d_loss(const Tensor<T>& real, const Tensor<T>& fake) {
  require(!real.empty() && !fake.empty(), ErrorCode::kInvalidArgument,
          "lsgan_d_loss: empty scores");
  DiscriminatorLoss<T> out{0.0, Tensor<T>(real.shape()), Tensor<T>(fake.shape())};
  const double inv_r = 1.0 / static_cast<double>(real.size());
  const double inv_f = 1.0 / static_cast<double>(fake.size());
  double sum_r = 0, sum_f = 0;
  for (std::size_t i = 0; i < real.size(); ++i) {
    const double e = 1.0 - real[i];
    sum_r += e * e;
    out.grad_real[i] = static_cast<T>(-2.0 * e * inv_r);
  }
  for (std::size_t i = 0; i < fake.size(); ++i) {
    const double f = fake[i];
    sum_f += f * f;
    out.grad_fake[i] = static_cast<T>(2.0 * f * inv_f);
  }
  out.value = sum_r * inv_r + sum_f * inv_f;
  return out;
}

template <typename T>
Loss<T> lsgan_g_loss(const Tensor<T>& fake) {
  require(!fake.empty(), ErrorCode::kInvalidArgument, "lsgan_g_loss: empty scores");
  Loss<T> out{0.0, Tensor<T>(fake.shape())};
  const double inv = 1.0 / static_cast<double>(fake.size());
  double sum = 0;
  for (std::size_t i = 0; i < fake.size(); ++i) {
    const double e = 1.0 - fake[i];
    sum += e * e;
    out.grad[i] = static_cast<T>(-2.0 * e * inv);
  }
  out.value = sum * inv;
  return out;
}

template Loss<float> l1_loss(const Tensor<float>&, const Tensor<float>&);
template Loss<double> l1_loss(const Tensor<double>&, const Tensor<double>&);
template DiscriminatorLoss<float> lsgan_d_loss(const Tensor<float>&, const Tensor<float>&);
template DiscriminatorLoss<double> lsgan_d_loss(const Tensor<double>&,
                                                const Tensor<double>&);
template Loss<float> lsgan_g_loss(const Tensor<float>&);
template Loss<double> lsgan_g_loss(const Tensor<double>&);

// ----------------------------------------------------------------- Trainer

Trainer::Trainer(TrainConfig config) : config_(std::move(config)) {
  validate(config_);
  std::mt19937_64 init_rng(config_.seed);
  generator_ = models::build_generator_model<float>(config_.model);
  generator_->initialize(init_rng);
  generator_->collect("", g_params_);
  g_opt_ = std::make_unique<nn::Adam<float>>(g_params_, config_.generator_adam);
  if (config_.regime == Regime::kGan) {
    discriminator_ = models::build_discriminator<float>(config_.model.resolution);
    discriminator_->initialize(init_rng);
    discriminator_->collect("discriminator", d_params_);
    d_opt_ = std::make_unique<nn::Adam<float>>(d_params_, config_.discriminator_adam);
  }
  if (!config_.warm_start.empty()) {
    const nn::Checkpoint warm = nn::load_checkpoint(config_.warm_start);
    nn::Checkpoint generator_only{warm.config, {}};
    for (const auto& t : warm.tensors)
      if (t.name.rfind("discriminator.", 0) != 0) generator_only.tensors.push_back(t);
    nn::restore(generator_only, g_params_);
  }
}

double Trainer::discriminator_step(const Tensor<float>& real, const Tensor<float>& fake) {
  require(discriminator_ != nullptr, ErrorCode::kInvalidArgument,
          "no discriminator in the generator-only regime");
  d_opt_->zero_grad();
  const Tensor<float> s_real = discriminator_->forward(real, nn::Mode::kTrain);
  const Tensor<float> placeholder(s_real.shape());
  // Each half of the loss is back-propagated right after its own forward
  // pass, since layers cache only the most recent input.
  DiscriminatorLoss<float> loss = lsgan_d_loss(s_real, placeholder);
  for (auto& g : loss.grad_real.storage()) g *= 0.5f;
  discriminator_->backward(loss.grad_real);
  const Tensor<float> s_fake = discriminator_->forward(fake, nn::Mode::kTrain);
  loss = lsgan_d_loss(s_real, s_fake);
  for (auto& g : loss.grad_fake.storage()) g *= 0.5f;
  discriminator_->backward(loss.grad_fake);
  d_opt_->step();
  return loss.value;
}

StepLog Trainer::backprop_generator(const Tensor<float>& pred,
                                    const Tensor<float>& target) {
  Loss<float> l1 = l1_loss(pred, target);
  StepLog log;
  log.l1 = l1.value;
  Tensor<float> grad = std::move(l1.grad);
  if (discriminator_ == nullptr) {
    log.total_g = log.l1;
  } else {
    const auto lambda = static_cast<float>(config_.lambda);
    for (auto& g : grad.storage()) g *= lambda;
    const Tensor<float> scores = discriminator_->forward(pred, nn::Mode::kTrain);
    const Loss<float> adv = lsgan_g_loss(scores);
    nn::add_into(grad, discriminator_->backward(adv.grad));
    // Only the generator is updated by this objective.
    nn::zero_grad(d_params_);
    log.gan_g = adv.value;
    log.total_g = log.gan_g + config_.lambda * log.l1;
  }
  generator_->backward(grad);
  return log;
}

StepLog Trainer::generator_gradients(const Tensor<float>& input,
                                     const Tensor<float>& target, Tensor<float>* fake) {
  g_opt_->zero_grad();
  Tensor<float> pred = generator_->forward(input, nn::Mode::kTrain);
  const StepLog log = backprop_generator(pred, target);
  if (fake != nullptr) *fake = std::move(pred);
  return log;
}

StepLog Trainer::step(const Tensor<float>& input, const Tensor<float>& target) {
  g_opt_->zero_grad();
  const Tensor<float> pred = generator_->forward(input, nn::Mode::kTrain);
  double gan_d = 0.0;
  if (discriminator_ != nullptr) gan_d = discriminator_step(target, pred);
  StepLog log = backprop_generator(pred, target);
  log.gan_d = gan_d;
  g_opt_->step();
  log.step = ++steps_;
  require_finite(log);
  return log;
}

Tensor<float> Trainer::predict(const Tensor<float>& input) {
  return generator_->forward(input, nn::Mode::kEval);
}

nn::Checkpoint Trainer::checkpoint() const {
  nn::ParameterList<float> all = g_params_;
  all.insert(all.end(), d_params_.begin(), d_params_.end());
  return nn::capture(all, write_train_config(config_).serialize());
}

void Trainer::load(const nn::Checkpoint& checkpoint) {
  nn::ParameterList<float> all = g_params_;
  all.insert(all.end(), d_params_.begin(), d_params_.end());
  nn::restore(checkpoint, all);
}

// ------------------------------------------------------------------ batches

signal::SquareImage target_image(const data::SampleRecord& record, Target target,
                                 int resolution) {
  const signal::SquareImage& source =
      target == Target::kDepth ? static_cast<const signal::SquareImage&>(record.depth)
                               : static_cast<const signal::SquareImage&>(record.gray);
  require(source.resolution >= resolution && source.resolution % resolution == 0,
          ErrorCode::kInvalidArgument,
          "sample " + record.id + " has resolution " +
              std::to_string(source.resolution) + ", cannot serve " +
              std::to_string(resolution));
  if (source.resolution == resolution) return source;
  if (target == Target::kDepth)
    return data::downsample_depth(record.depth, resolution);
  return data::downsample_gray(record.gray, resolution);
}

Batch make_batch(std::span<const data::SampleRecord> records,
                 std::span<const std::size_t> indices, const TrainConfig& config,
                 std::mt19937_64* jitter_rng) {
  std::vector<signal::BinauralClip> clips;
  std::vector<signal::SquareImage> images;
  clips.reserve(indices.size());
  images.reserve(indices.size());
  for (std::size_t i : indices) {
    const data::SampleRecord& r = records[i];
    if (jitter_rng != nullptr) {
      const auto padded = signal::pad_for_jitter(r.clip);
      clips.push_back(
          signal::jitter_window(padded, signal::kMaxJitterSamples, *jitter_rng).clip);
    } else {
      clips.push_back(r.clip);
    }
    images.push_back(target_image(r, config.target, config.model.resolution));
  }
  std::vector<const signal::BinauralClip*> clip_ptrs;
  std::vector<const signal::SquareImage*> image_ptrs;
  for (const auto& c : clips) clip_ptrs.push_back(&c);
  for (const auto& im : images) image_ptrs.push_back(&im);
  return {models::make_input(clip_ptrs, config.model), models::make_target(image_ptrs)};
}

double evaluate_l1(Trainer& trainer, std::span<const data::SampleRecord> records,
                   int batch_size) {
  require(!records.empty(), ErrorCode::kInvalidArgument, "nothing to evaluate");
  double sum = 0;
  std::size_t count = 0;
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < records.size(); start += batch_size) {
    idx.clear();
    for (std::size_t i = start; i < std::min(records.size(), start + batch_size); ++i)
      idx.push_back(i);
    const Batch b = make_batch(records, idx, trainer.config(), nullptr);
    const Tensor<float> pred = trainer.predict(b.input);
    for (std::size_t i = 0; i < pred.size(); ++i)
      sum += std::abs(static_cast<double>(pred[i]) - b.target[i]);
    count += pred.size();
  }
  return sum / static_cast<double>(count);
}

// ---------------------------------------------------------------- training

TrainResult train(const TrainConfig& config,
                  std::span<const data::SampleRecord> train_split,
                  std::span<const data::SampleRecord> val_split,
                  const fs::path& out_dir) {
  validate(config);
  require(!train_split.empty(), ErrorCode::kInvalidArgument, "empty training split");
  fs::create_directories(out_dir);
  write_train_config(config).save(out_dir / "config.txt");

  Trainer trainer(config);
  std::mt19937_64 order_rng(config.seed + 1);
  std::mt19937_64 jitter_rng(config.seed + 2);

  std::ofstream loss_csv(out_dir / "loss.csv", std::ios::trunc);
  std::ofstream epoch_csv(out_dir / "epochs.csv", std::ios::trunc);
  require(loss_csv && epoch_csv, ErrorCode::kIo,
          "cannot write logs under " + out_dir.string());
  loss_csv << "step,l1,gan_g,gan_d,total_g\n";
  epoch_csv << "epoch,train_l1,val_l1\n";

  TrainResult result;
  result.checkpoint = out_dir / "best.ckpt";
  result.best_val_l1 = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(train_split.size());
  std::iota(order.begin(), order.end(), 0);
  bool done = false;
  for (int epoch = 1; epoch <= config.epochs && !done; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    double l1_sum = 0;
    std::size_t l1_count = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const Batch b = make_batch(train_split, idx, config,
                                 config.jitter ? &jitter_rng : nullptr);
      const StepLog log = trainer.step(b.input, b.target);
      result.steps.push_back(log);
      loss_csv << log.step << ',' << format_loss(log.l1) << ','
               << format_loss(log.gan_g) << ',' << format_loss(log.gan_d) << ','
               << format_loss(log.total_g) << '\n';
      l1_sum += log.l1 * static_cast<double>(idx.size());
      l1_count += idx.size();
      if (config.max_steps > 0 && trainer.steps() >= config.max_steps) {
        done = true;
        break;
      }
    }
    EpochLog e;
    e.epoch = epoch;
    e.train_l1 = l1_sum / static_cast<double>(l1_count);
    e.val_l1 = val_split.empty() ? e.train_l1 : evaluate_l1(trainer, val_split);
    result.epochs.push_back(e);
    epoch_csv << e.epoch << ',' << format_loss(e.train_l1) << ','
              << format_loss(e.val_l1) << '\n' << std::flush;
    spdlog::info("{} epoch {} train_l1={:.5f} val_l1={:.5f}", config.model.label(),
                 epoch, e.train_l1, e.val_l1);
    if (e.val_l1 < result.best_val_l1) {
      result.best_val_l1 = e.val_l1;
      result.best_epoch = epoch;
      nn::save_checkpoint(trainer.checkpoint(), result.checkpoint);
    }
  }
  return result;
}

TrainResult train_generator_only(const TrainConfig& config,
                                 std::span<const data::SampleRecord> train_split,
                                 std::span<const data::SampleRecord> val_split,
                                 const fs::path& out_dir) {
  require(config.regime == Regime::kGenOnly, ErrorCode::kInvalidArgument,
          "train_generator_only needs regime=gen_only");
  return train(config, train_split, val_split, out_dir);
}

TrainResult train_gan(const TrainConfig& config,
                      std::span<const data::SampleRecord> train_split,
                      std::span<const data::SampleRecord> val_split,
                      const fs::path& out_dir) {
  require(config.regime == Regime::kGan, ErrorCode::kInvalidArgument,
          "train_gan needs regime=gan");
  return train(config, train_split, val_split, out_dir);
}

// --------------------------------------------------------------- baselines

signal::SquareImage baseline_mean(std::span<const data::SampleRecord> train_split,
                                  Target target, int resolution) {
  require(!train_split.empty(), ErrorCode::kInvalidArgument, "empty training split");
  std::vector<double> sum(static_cast<std::size_t>(resolution) * resolution, 0.0);
  for (const auto& r : train_split) {
    const signal::SquareImage im = target_image(r, target, resolution);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += im.pixels[i];
  }
  signal::SquareImage out;
  out.resolution = resolution;
  out.pixels.resize(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i)
    out.pixels[i] = static_cast<float>(sum[i] / static_cast<double>(train_split.size()));
  return out;
}

signal::SquareImage baseline_random(int resolution, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  signal::SquareImage out;
  out.resolution = resolution;
  out.pixels.resize(static_cast<std::size_t>(resolution) * resolution);
  for (auto& p : out.pixels) p = static_cast<float>(u(rng));
  return out;
}

double random_baseline_expectation(std::span<const signal::SquareImage> images) {
  double sum = 0;
  std::size_t count = 0;
  for (const auto& im : images) {
    for (float c : im.pixels) sum += static_cast<double>(c) * c - c + 0.5;
    count += im.pixels.size();
  }
  require(count > 0, ErrorCode::kInvalidArgument, "no pixels");
  return sum / static_cast<double>(count);
}

double mean_abs_error(const signal::SquareImage& a, const signal::SquareImage& b) {
  require(a.resolution == b.resolution && a.pixels.size() == b.pixels.size() &&
              !a.pixels.empty(),
          ErrorCode::kInvalidArgument, "image size mismatch");
  double sum = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    sum += std::abs(static_cast<double>(a.pixels[i]) - b.pixels[i]);
  return sum / static_cast<double>(a.pixels.size());
}

}  // namespace echo2depth::training
