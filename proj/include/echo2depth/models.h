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

#ifndef ECHO2DEPTH_MODELS_H_
#define ECHO2DEPTH_MODELS_H_

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "echo2depth/keyvalue.h"
#include "echo2depth/nn/layers.h"
#include "echo2depth/signal_pipeline.h"

namespace echo2depth::models {

using nn::Layer;
using nn::Mode;
using nn::ParameterList;
using nn::Sequential;
using nn::Shape;
using nn::Tensor;

enum class Representation { kWaveform, kSpectrogram };
enum class Fusion { kEarly, kLate };
enum class GeneratorKind { kUnet, kDirect };

const char* name(Representation r);
const char* name(Fusion f);
const char* name(GeneratorKind g);
Representation parse_representation(std::string_view text);
Fusion parse_fusion(std::string_view text);
GeneratorKind parse_generator(std::string_view text);

inline constexpr float kLeakySlope = 0.2f;
inline constexpr int kLatentChannels = 1024;
inline constexpr int kUnetSide = 32;  // 1024 = 32 x 32
inline constexpr std::array<int, 4> kResolutions = {16, 32, 64, 128};

struct ConvRow {
  int filters;
  int kernel;
  int stride;
  int padding;
};

// Waveform encoder, one row per temporal convolution.
inline constexpr std::array<ConvRow, 8> kWaveformEncoderRows = {{
    {32, 228, 2, 114},
    {64, 128, 3, 64},
    {128, 64, 3, 32},
    {256, 32, 3, 16},
    {256, 16, 3, 8},
    {512, 8, 3, 4},
    {512, 4, 3, 2},
    {1024, 3, 3, 1},
}};

// Direct upsampling generator for 128 x 128; `resolution` is the side after
// each row.
struct UpRow {
  int filters;
  int kernel;
  int stride;
  int padding;
  int resolution;
};
inline constexpr std::array<UpRow, 7> kDirectGeneratorRows = {{
    {512, 4, 1, 0, 4},
    {512, 4, 2, 1, 8},
    {256, 4, 2, 1, 16},
    {128, 4, 2, 1, 32},
    {128, 4, 2, 1, 64},
    {64, 4, 2, 1, 128},
    {1, 1, 1, 0, 128},
}};

// PatchGAN discriminator for 128 x 128.
inline constexpr std::array<ConvRow, 4> kDiscriminatorRows128 = {{
    {64, 4, 2, 1},
    {128, 4, 2, 1},
    {256, 4, 2, 1},
    {1, 4, 2, 1},
}};

// Spectrogram encoder: 3x3 kernels, padding 1, strides (frequency, time).
struct SpectrogramRow {
  int filters;
  int stride_freq;
  int stride_time;
};
inline constexpr std::array<SpectrogramRow, 8> kSpectrogramEncoderRows = {{
    {32, 2, 2},
    {64, 2, 2},
    {128, 2, 2},
    {256, 2, 2},
    {256, 1, 2},
    {512, 1, 2},
    {512, 1, 2},
    {1024, 1, 2},
}};

struct ModelConfig {
  Representation representation = Representation::kWaveform;
  Fusion fusion = Fusion::kEarly;
  GeneratorKind generator = GeneratorKind::kUnet;
  int resolution = 16;
  int frequency_bins = 10;  // spectrogram latent height f
  bool share_ear_weights = false;  // late fusion only
  bool log_spectrogram = false;

  int latent_height() const {
    return representation == Representation::kSpectrogram ? frequency_bins : 1;
  }
  Shape input_shape(int batch) const;
  Shape output_shape(int batch) const { return {batch, 1, resolution, resolution}; }
  std::string label() const;  // e.g. "waveform-early-unet-16"
};

void validate(const ModelConfig& config);
void write_config(const ModelConfig& config, KeyValueFile& out);
ModelConfig read_model_config(const KeyValueFile& in);

// Strided 1-D convolution geometry: the start of the signal is padded by
// `padding`, the end by whatever yields ceil(length / stride) outputs.
nn::ConvSpec temporal_conv_spec(int in_channels, const ConvRow& row,
                                int input_length);

// Fixed-length 1-D encoder over [N, 2, 1, L] producing [N, 1024, 1, 1].
// Late fusion runs the first rows.size() - 1 convolutions per ear and joins
// the two feature maps along channels in front of the last convolution.
template <typename T>
class WaveformEncoder : public Layer<T> {
 public:
  WaveformEncoder(std::span<const ConvRow> rows, int input_length, Fusion fusion,
                  bool share_ear_weights = false);

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;
  void collect(const std::string& prefix, ParameterList<T>& out) override;
  void initialize(std::mt19937_64& rng) override;

  // Time length after each convolution.
  std::vector<int> time_trace() const { return trace_; }
  int input_length() const { return input_length_; }

 private:
  int input_length_;
  Fusion fusion_;
  bool share_;
  std::vector<int> trace_;
  std::unique_ptr<Sequential<T>> left_;   // early: the whole trunk
  std::unique_ptr<Sequential<T>> right_;  // late, unshared only
  std::unique_ptr<Sequential<T>> head_;   // late: final convolution
  int trunk_channels_ = 0;
};

// [N, 2, 257, 200] -> [N, 1024, f, 1].
template <typename T>
class SpectrogramEncoder : public Sequential<T> {
 public:
  explicit SpectrogramEncoder(int frequency_bins);
  std::vector<std::array<int, 2>> trace() const;  // (freq, time) per layer

 private:
  int frequency_bins_;
};

// Latent [N, 1024, f, 1] -> image [N, 1, R, R] in [0, 1].
template <typename T>
class UnetGenerator : public Layer<T> {
 public:
  UnetGenerator(int resolution, int latent_height);

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;
  void collect(const std::string& prefix, ParameterList<T>& out) override;
  void initialize(std::mt19937_64& rng) override;

  int down_blocks() const { return static_cast<int>(down_.size()); }
  int up_blocks() const { return static_cast<int>(up_.size()); }
  int linear_layers() const { return linear_layers_; }

 private:
  struct UpBlock {
    std::unique_ptr<Sequential<T>> upsample;
    int skip = -1;  // index into down_, or -1
    int skip_channels = 0;
    std::unique_ptr<Sequential<T>> refine;
  };

  int resolution_;
  int linear_layers_ = 0;
  std::unique_ptr<Sequential<T>> head_;  // optional linear layers + reshape
  std::vector<std::unique_ptr<Sequential<T>>> down_;
  std::vector<std::unique_ptr<nn::MaxPool2d<T>>> pool_;
  std::vector<UpBlock> up_;
  std::unique_ptr<Sequential<T>> out_;
  std::vector<Tensor<T>> skip_grads_;
};

// Transposed-convolution stack truncated at the target resolution.
template <typename T>
class DirectGenerator : public Sequential<T> {
 public:
  DirectGenerator(int resolution, int latent_height,
                  std::span<const UpRow> rows = kDirectGeneratorRows,
                  int latent_channels = kLatentChannels);
  int upsampling_layers() const { return upsampling_layers_; }

 private:
  int upsampling_layers_ = 0;
};

// Patch discriminator rows for a given resolution; all yield an 8 x 8 grid.
std::vector<ConvRow> discriminator_rows(int resolution);
// Receptive field of one output cell of a stack of convolutions.
int receptive_field(std::span<const ConvRow> rows);

// Leaky ReLU after every row but the last; batch norm on the middle rows.
template <typename T>
std::unique_ptr<Sequential<T>> build_discriminator(std::span<const ConvRow> rows,
                                                   int in_channels = 1);

// Encoder followed by generator, registered as "encoder" and "generator".
template <typename T>
std::unique_ptr<Sequential<T>> build_generator_model(const ModelConfig& config);

template <typename T>
std::unique_ptr<Sequential<T>> build_discriminator(int resolution);

// Network input for a batch of clips per the configured representation.
Tensor<float> make_input(std::span<const signal::BinauralClip* const> clips,
                         const ModelConfig& config);
// Stacks images into [N, 1, R, R].
Tensor<float> make_target(std::span<const signal::SquareImage* const> images);

std::size_t parameter_count(const ParameterList<float>& params);

}  // namespace echo2depth::models

#endif  // ECHO2DEPTH_MODELS_H_
