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

#include "echo2depth/models.h"

#include <algorithm>
#include <tuple>

#include "echo2depth/acoustic_sim.h"

namespace echo2depth::models {
namespace {

using nn::BatchNorm2d;
using nn::Conv2d;
using nn::ConvSpec;
using nn::ConvTranspose2d;
using nn::LeakyRelu;

template <typename E>
struct NamedValue {
  E value;
  const char* text;
};

constexpr NamedValue<Representation> kRepresentations[] = {
    {Representation::kWaveform, "waveform"},
    {Representation::kSpectrogram, "spectrogram"}};
constexpr NamedValue<Fusion> kFusions[] = {{Fusion::kEarly, "early"},
                                           {Fusion::kLate, "late"}};
constexpr NamedValue<GeneratorKind> kGenerators[] = {
    {GeneratorKind::kUnet, "unet"}, {GeneratorKind::kDirect, "direct"}};

template <typename E, std::size_t N>
const char* lookup(const NamedValue<E> (&table)[N], E value) {
  for (const auto& entry : table)
    if (entry.value == value) return entry.text;
  return "?";
}

template <typename E, std::size_t N>
E parse(const NamedValue<E> (&table)[N], std::string_view text, const char* what) {
  for (const auto& entry : table)
    if (text == entry.text) return entry.value;
  throw Error(ErrorCode::kInvalidArgument,
              std::string("unknown ") + what + " '" + std::string(text) + "'");
}

// conv -> batch norm -> leaky ReLU
template <typename T>
void add_conv_block(Sequential<T>& seq, const std::string& name, ConvSpec spec,
                    bool activation, float slope = kLeakySlope) {
  const int channels = spec.out_channels;
  seq.template emplace<Conv2d<T>>(name, spec);
  if (!activation) return;
  seq.template emplace<BatchNorm2d<T>>(name + "_bn", channels);
  seq.template emplace<LeakyRelu<T>>(name + "_act", static_cast<T>(slope));
}

template <typename T>
void add_deconv_block(Sequential<T>& seq, const std::string& name, ConvSpec spec,
                      float slope) {
  const int channels = spec.out_channels;
  seq.template emplace<ConvTranspose2d<T>>(name, spec);
  seq.template emplace<BatchNorm2d<T>>(name + "_bn", channels);
  seq.template emplace<LeakyRelu<T>>(name + "_act", static_cast<T>(slope));
}

// f * 1024 -> 1024 -> 1024 when the latent has a frequency axis.
template <typename T>
int add_latent_projection(Sequential<T>& seq, int latent_height) {
  if (latent_height == 1) return 0;
  seq.template emplace<nn::Linear<T>>("fc1", latent_height * kLatentChannels,
                                      kLatentChannels);
  seq.template emplace<LeakyRelu<T>>("fc1_act", static_cast<T>(kLeakySlope));
  seq.template emplace<nn::Linear<T>>("fc2", kLatentChannels, kLatentChannels);
  return 2;
}

}  // namespace

const char* name(Representation r) { return lookup(kRepresentations, r); }
const char* name(Fusion f) { return lookup(kFusions, f); }
const char* name(GeneratorKind g) { return lookup(kGenerators, g); }

Representation parse_representation(std::string_view text) {
  return parse(kRepresentations, text, "representation");
}
Fusion parse_fusion(std::string_view text) { return parse(kFusions, text, "fusion"); }
GeneratorKind parse_generator(std::string_view text) {
  return parse(kGenerators, text, "generator");
}

Shape ModelConfig::input_shape(int batch) const {
  if (representation == Representation::kWaveform)
    return {batch, 2, 1, signal::kClipSamples};
  return {batch, 2, signal::kFrequencyBins, signal::kSpectrogramFrames};
}

std::string ModelConfig::label() const {
  std::string out = name(representation);
  if (representation == Representation::kWaveform) {
    out += "-";
    out += name(fusion);
  } else {
    out += "-f" + std::to_string(frequency_bins);
  }
  out += "-";
  out += name(generator);
  out += "-" + std::to_string(resolution);
  return out;
}

void validate(const ModelConfig& config) {
  require(sim::is_supported_resolution(config.resolution),
          ErrorCode::kInvalidArgument,
          "unsupported resolution " + std::to_string(config.resolution));
  require(config.representation == Representation::kWaveform ||
              config.fusion == Fusion::kEarly,
          ErrorCode::kInvalidArgument,
          "late fusion is only defined for the waveform encoder");
  require(config.frequency_bins >= 1 && config.frequency_bins <= 17,
          ErrorCode::kInvalidArgument,
          "frequency_bins must lie in [1, 17], got " +
              std::to_string(config.frequency_bins));
}

void write_config(const ModelConfig& config, KeyValueFile& out) {
  out.set("representation", name(config.representation));
  out.set("fusion", name(config.fusion));
  out.set("generator", name(config.generator));
  out.set("resolution", std::to_string(config.resolution));
  out.set("frequency_bins", std::to_string(config.frequency_bins));
  out.set("share_ear_weights", config.share_ear_weights ? "true" : "false");
  out.set("log_spectrogram", config.log_spectrogram ? "true" : "false");
}

ModelConfig read_model_config(const KeyValueFile& in) {
  ModelConfig c;
  c.representation = parse_representation(in.get_or("representation", "waveform"));
  c.fusion = parse_fusion(in.get_or("fusion", "early"));
  c.generator = parse_generator(in.get_or("generator", "unet"));
  c.resolution = static_cast<int>(in.get_int_or("resolution", 16));
  c.frequency_bins = static_cast<int>(in.get_int_or("frequency_bins", 10));
  c.share_ear_weights = in.get_bool_or("share_ear_weights", false);
  c.log_spectrogram = in.get_bool_or("log_spectrogram", false);
  validate(c);
  return c;
}

ConvSpec temporal_conv_spec(int in_channels, const ConvRow& row, int input_length) {
  const int out_length = (input_length + row.stride - 1) / row.stride;
  const int end_pad = std::max(
      0, (out_length - 1) * row.stride + row.kernel - input_length - row.padding);
  ConvSpec spec = ConvSpec::temporal(in_channels, row.filters, row.kernel,
                                     row.stride, row.padding);
  spec.pad_w_end = end_pad;
  return spec;
}

// -------------------------------------------------------- WaveformEncoder

template <typename T>
WaveformEncoder<T>::WaveformEncoder(std::span<const ConvRow> rows, int input_length,
                                    Fusion fusion, bool share_ear_weights)
    : input_length_(input_length), fusion_(fusion), share_(share_ear_weights) {
  require(rows.size() >= 2, ErrorCode::kInvalidArgument,
          "waveform encoder needs at least two convolutions");
  const bool late = fusion == Fusion::kLate;
  auto build_trunk = [&](int in_channels, std::size_t count) {
    auto seq = std::make_unique<Sequential<T>>();
    int length = input_length;
    int channels = in_channels;
    std::vector<int> trace;
    for (std::size_t i = 0; i < count; ++i) {
      const ConvSpec spec = temporal_conv_spec(channels, rows[i], length);
      length = nn::conv_output_size(length, spec.kernel_w, spec.stride_w, spec.pad_w,
                                    spec.pad_right());
      trace.push_back(length);
      add_conv_block(*seq, "conv" + std::to_string(i + 1), spec,
                     i + 1 < rows.size());
      channels = rows[i].filters;
    }
    return std::make_tuple(std::move(seq), trace, length);
  };
  if (!late) {
    auto [seq, trace, length] = build_trunk(2, rows.size());
    left_ = std::move(seq);
    trace_ = trace;
    require(length == 1, ErrorCode::kInvalidArgument,
            "waveform encoder leaves a time axis of " + std::to_string(length));
    return;
  }
  auto [seq, trace, length] = build_trunk(1, rows.size() - 1);
  left_ = std::move(seq);
  if (!share_) right_ = std::get<0>(build_trunk(1, rows.size() - 1));
  trunk_channels_ = rows[rows.size() - 2].filters;
  const ConvSpec last = temporal_conv_spec(2 * trunk_channels_, rows.back(), length);
  head_ = std::make_unique<Sequential<T>>();
  head_->template emplace<Conv2d<T>>("conv" + std::to_string(rows.size()), last);
  length = nn::conv_output_size(length, last.kernel_w, last.stride_w, last.pad_w,
                                last.pad_right());
  trace.push_back(length);
  trace_ = trace;
  require(length == 1, ErrorCode::kInvalidArgument,
          "waveform encoder leaves a time axis of " + std::to_string(length));
}

template <typename T>
Shape WaveformEncoder<T>::output_shape(const Shape& in) const {
  require(in.c == 2 && in.h == 1 && in.w == input_length_,
          ErrorCode::kInvalidArgument,
          "waveform encoder expects [N,2,1," + std::to_string(input_length_) +
              "], got " + in.str());
  const int channels = fusion_ == Fusion::kEarly
                           ? left_->output_shape(in).c
                           : head_->output_shape({in.n, 2 * trunk_channels_, 1,
                                                  trace_[trace_.size() - 2]})
                                 .c;
  return {in.n, channels, 1, 1};
}

template <typename T>
Tensor<T> WaveformEncoder<T>::forward(const Tensor<T>& input, Mode mode) {
  const Shape in = input.shape();
  output_shape(in);
  if (fusion_ == Fusion::kEarly) return left_->forward(input, mode);
  Tensor<T> joined;
  if (share_) {
    Tensor<T> ears = left_->forward(input.reshaped({in.n * 2, 1, 1, in.w}), mode);
    const Shape es = ears.shape();
    joined = ears.reshaped({in.n, es.c * 2, es.h, es.w});
  } else {
    Tensor<T> l, r;
    nn::split_channels(input, 1, l, r);
    joined = nn::concat_channels(left_->forward(l, mode), right_->forward(r, mode));
  }
  return head_->forward(joined, mode);
}

template <typename T>
Tensor<T> WaveformEncoder<T>::backward(const Tensor<T>& grad_output) {
  if (fusion_ == Fusion::kEarly) return left_->backward(grad_output);
  Tensor<T> g = head_->backward(grad_output);
  const Shape gs = g.shape();
  if (share_) {
    Tensor<T> ears = left_->backward(g.reshaped({gs.n * 2, gs.c / 2, gs.h, gs.w}));
    return ears.reshaped({gs.n, 2, 1, ears.shape().w});
  }
  Tensor<T> gl, gr;
  nn::split_channels(g, trunk_channels_, gl, gr);
  return nn::concat_channels(left_->backward(gl), right_->backward(gr));
}

template <typename T>
void WaveformEncoder<T>::collect(const std::string& prefix, ParameterList<T>& out) {
  if (fusion_ == Fusion::kEarly) {
    left_->collect(prefix, out);
    return;
  }
  left_->collect(nn::join_name(prefix, share_ ? "ear" : "left"), out);
  if (right_) right_->collect(nn::join_name(prefix, "right"), out);
  head_->collect(prefix, out);
}

template <typename T>
void WaveformEncoder<T>::initialize(std::mt19937_64& rng) {
  left_->initialize(rng);
  if (right_) right_->initialize(rng);
  if (head_) head_->initialize(rng);
}

// ----------------------------------------------------- SpectrogramEncoder

template <typename T>
SpectrogramEncoder<T>::SpectrogramEncoder(int frequency_bins)
    : frequency_bins_(frequency_bins) {
  int channels = 2;
  for (std::size_t i = 0; i < kSpectrogramEncoderRows.size(); ++i) {
    const SpectrogramRow& row = kSpectrogramEncoderRows[i];
    ConvSpec spec{channels, row.filters, 3, 3, row.stride_freq, row.stride_time,
                  1, 1, -1, -1};
    add_conv_block(*this, "conv" + std::to_string(i + 1), spec,
                   i + 1 < kSpectrogramEncoderRows.size());
    channels = row.filters;
  }
  this->template emplace<nn::AdaptiveAvgPoolHeight<T>>("freq_pool", frequency_bins);
}

template <typename T>
std::vector<std::array<int, 2>> SpectrogramEncoder<T>::trace() const {
  std::vector<std::array<int, 2>> out;
  Shape s{1, 2, signal::kFrequencyBins, signal::kSpectrogramFrames};
  for (std::size_t i = 0; i < this->size(); ++i) {
    const Layer<T>& layer = this->layer(i);
    s = layer.output_shape(s);
    if (dynamic_cast<const Conv2d<T>*>(&layer) != nullptr ||
        dynamic_cast<const nn::AdaptiveAvgPoolHeight<T>*>(&layer) != nullptr)
      out.push_back({s.h, s.w});
  }
  return out;
}

// ---------------------------------------------------------- UnetGenerator

template <typename T>
UnetGenerator<T>::UnetGenerator(int resolution, int latent_height)
    : resolution_(resolution) {
  require(sim::is_supported_resolution(resolution), ErrorCode::kInvalidArgument,
          "unsupported resolution " + std::to_string(resolution));
  const T relu = T(0);
  head_ = std::make_unique<Sequential<T>>();
  linear_layers_ = add_latent_projection(*head_, latent_height);
  head_->template emplace<nn::Reshape<T>>("reshape", 1, kUnetSide, kUnetSide);

  constexpr int kDownChannels[] = {32, 64, 128};
  int channels = 1;
  for (int i = 0; i < 3; ++i) {
    auto block = std::make_unique<Sequential<T>>();
    const int c = kDownChannels[i];
    add_conv_block(*block, "conv1", ConvSpec::square(channels, c, 3, 1, 1), true, relu);
    add_conv_block(*block, "conv2", ConvSpec::square(c, c, 3, 1, 1), true, relu);
    down_.push_back(std::move(block));
    pool_.push_back(std::make_unique<nn::MaxPool2d<T>>(2));
    channels = c;
  }

  // Output channels of each up block, starting from the 4x4 bottleneck.
  constexpr int kUpChannels[] = {128, 64, 32, 32, 16};
  int side = kUnetSide >> 3;
  for (int i = 0; side < resolution; ++i) {
    side *= 2;
    const int c = kUpChannels[i];
    UpBlock up;
    up.upsample = std::make_unique<Sequential<T>>();
    add_deconv_block(*up.upsample, "deconv1", ConvSpec::square(channels, c, 4, 2, 1),
                     relu);
    int refine_in = c;
    for (int d = 0; d < 3; ++d) {
      if ((kUnetSide >> d) == side) {
        up.skip = d;
        up.skip_channels = kDownChannels[d];
        refine_in += kDownChannels[d];
      }
    }
    up.refine = std::make_unique<Sequential<T>>();
    add_deconv_block(*up.refine, "deconv2", ConvSpec::square(refine_in, c, 3, 1, 1),
                     relu);
    up_.push_back(std::move(up));
    channels = c;
  }
  out_ = std::make_unique<Sequential<T>>();
  out_->template emplace<Conv2d<T>>("conv", ConvSpec::square(channels, 1, 1, 1, 0));
  out_->template emplace<nn::Sigmoid<T>>("sigmoid");
}

template <typename T>
Shape UnetGenerator<T>::output_shape(const Shape& input) const {
  head_->output_shape(input);
  return {input.n, 1, resolution_, resolution_};
}

template <typename T>
Tensor<T> UnetGenerator<T>::forward(const Tensor<T>& input, Mode mode) {
  Tensor<T> x = head_->forward(input, mode);
  std::vector<Tensor<T>> skips;
  for (std::size_t i = 0; i < down_.size(); ++i) {
    skips.push_back(down_[i]->forward(x, mode));
    x = pool_[i]->forward(skips.back(), mode);
  }
  for (UpBlock& up : up_) {
    x = up.upsample->forward(x, mode);
    if (up.skip >= 0) x = nn::concat_channels(x, skips[up.skip]);
    x = up.refine->forward(x, mode);
  }
  return out_->forward(x, mode);
}

template <typename T>
Tensor<T> UnetGenerator<T>::backward(const Tensor<T>& grad_output) {
  Tensor<T> g = out_->backward(grad_output);
  skip_grads_.assign(down_.size(), Tensor<T>());
  for (auto it = up_.rbegin(); it != up_.rend(); ++it) {
    g = it->refine->backward(g);
    if (it->skip >= 0) {
      Tensor<T> main;
      nn::split_channels(g, g.shape().c - it->skip_channels, main,
                         skip_grads_[it->skip]);
      g = std::move(main);
    }
    g = it->upsample->backward(g);
  }
  for (int i = static_cast<int>(down_.size()) - 1; i >= 0; --i) {
    g = pool_[i]->backward(g);
    if (!skip_grads_[i].empty()) nn::add_into(g, skip_grads_[i]);
    g = down_[i]->backward(g);
  }
  skip_grads_.clear();
  return head_->backward(g);
}

template <typename T>
void UnetGenerator<T>::collect(const std::string& prefix, ParameterList<T>& out) {
  head_->collect(nn::join_name(prefix, "head"), out);
  for (std::size_t i = 0; i < down_.size(); ++i)
    down_[i]->collect(nn::join_name(prefix, "down" + std::to_string(i + 1)), out);
  for (std::size_t i = 0; i < up_.size(); ++i) {
    const std::string p = nn::join_name(prefix, "up" + std::to_string(i + 1));
    up_[i].upsample->collect(p, out);
    up_[i].refine->collect(p, out);
  }
  out_->collect(nn::join_name(prefix, "out"), out);
}

template <typename T>
void UnetGenerator<T>::initialize(std::mt19937_64& rng) {
  head_->initialize(rng);
  for (auto& d : down_) d->initialize(rng);
  for (auto& u : up_) {
    u.upsample->initialize(rng);
    u.refine->initialize(rng);
  }
  out_->initialize(rng);
}

// -------------------------------------------------------- DirectGenerator

template <typename T>
DirectGenerator<T>::DirectGenerator(int resolution, int latent_height,
                                    std::span<const UpRow> rows, int latent_channels) {
  require(rows.size() >= 2, ErrorCode::kInvalidArgument,
          "direct generator needs an upsampling row and an output row");
  if (latent_height != 1) {
    require(latent_channels == kLatentChannels, ErrorCode::kInvalidArgument,
            "latent projection expects 1024 channels");
    add_latent_projection(*this, latent_height);
    this->template emplace<nn::Reshape<T>>("reshape", latent_channels, 1, 1);
  }
  int channels = latent_channels;
  int side = 1;
  for (std::size_t i = 0; i + 1 < rows.size() && side < resolution; ++i) {
    const UpRow& row = rows[i];
    ConvSpec spec = ConvSpec::square(channels, row.filters, row.kernel, row.stride,
                                     row.padding);
    side = nn::transposed_output_size(side, row.kernel, row.stride, row.padding,
                                      row.padding);
    require(side == row.resolution, ErrorCode::kInvalidArgument,
            "direct generator row resolution mismatch");
    add_deconv_block(*this, "up" + std::to_string(i + 1), spec, kLeakySlope);
    channels = row.filters;
    ++upsampling_layers_;
  }
  require(side == resolution, ErrorCode::kInvalidArgument,
          "direct generator cannot reach resolution " + std::to_string(resolution));
  const UpRow& last = rows.back();
  this->template emplace<ConvTranspose2d<T>>(
      "out", ConvSpec::square(channels, last.filters, last.kernel, last.stride,
                              last.padding));
  this->template emplace<nn::Sigmoid<T>>("sigmoid");
}

// ----------------------------------------------------------- discriminator

std::vector<ConvRow> discriminator_rows(int resolution) {
  require(sim::is_supported_resolution(resolution), ErrorCode::kInvalidArgument,
          "unsupported resolution " + std::to_string(resolution));
  std::vector<ConvRow> rows;
  switch (resolution) {
    case 128:
      rows.assign(kDiscriminatorRows128.begin(), kDiscriminatorRows128.end());
      break;
    case 64:
      rows = {{64, 4, 2, 1}, {128, 4, 2, 1}, {1, 4, 2, 1}};
      break;
    case 32:
      rows = {{64, 4, 2, 1}, {1, 4, 2, 1}};
      break;
    default:
      rows = {{64, 4, 2, 1}, {1, 1, 1, 0}};
      break;
  }
  return rows;
}

int receptive_field(std::span<const ConvRow> rows) {
  int field = 1;
  int jump = 1;
  for (const ConvRow& row : rows) {
    field += (row.kernel - 1) * jump;
    jump *= row.stride;
  }
  return field;
}

template <typename T>
std::unique_ptr<Sequential<T>> build_discriminator(std::span<const ConvRow> rows,
                                                   int in_channels) {
  auto seq = std::make_unique<Sequential<T>>();
  int channels = in_channels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvRow& row = rows[i];
    const std::string name = "conv" + std::to_string(i + 1);
    seq->template emplace<Conv2d<T>>(
        name, ConvSpec::square(channels, row.filters, row.kernel, row.stride,
                               row.padding));
    const bool last = i + 1 == rows.size();
    if (!last) {
      if (i > 0) seq->template emplace<BatchNorm2d<T>>(name + "_bn", row.filters);
      seq->template emplace<LeakyRelu<T>>(name + "_act", static_cast<T>(kLeakySlope));
    }
    channels = row.filters;
  }
  return seq;
}

template <typename T>
std::unique_ptr<Sequential<T>> build_discriminator(int resolution) {
  const std::vector<ConvRow> rows = discriminator_rows(resolution);
  return build_discriminator<T>(std::span<const ConvRow>(rows), 1);
}

template <typename T>
std::unique_ptr<Sequential<T>> build_generator_model(const ModelConfig& config) {
  validate(config);
  auto model = std::make_unique<Sequential<T>>();
  if (config.representation == Representation::kWaveform) {
    model->template emplace<WaveformEncoder<T>>(
        "encoder", std::span<const ConvRow>(kWaveformEncoderRows), signal::kClipSamples,
        config.fusion, config.share_ear_weights);
  } else {
    model->template emplace<SpectrogramEncoder<T>>("encoder", config.frequency_bins);
  }
  if (config.generator == GeneratorKind::kUnet) {
    model->template emplace<UnetGenerator<T>>("generator", config.resolution,
                                              config.latent_height());
  } else {
    model->template emplace<DirectGenerator<T>>("generator", config.resolution,
                                                config.latent_height());
  }
  return model;
}

Tensor<float> make_input(std::span<const signal::BinauralClip* const> clips,
                         const ModelConfig& config) {
  const int n = static_cast<int>(clips.size());
  Tensor<float> input(config.input_shape(n));
  const std::size_t per = input.shape().per_sample();
  for (int i = 0; i < n; ++i) {
    const signal::BinauralClip& clip = *clips[i];
    validate(clip);
    float* dst = input.data() + i * per;
    if (config.representation == Representation::kWaveform) {
      std::copy(clip.left.begin(), clip.left.end(), dst);
      std::copy(clip.right.begin(), clip.right.end(), dst + signal::kClipSamples);
    } else {
      const signal::Spectrogram spec =
          signal::compute_spectrogram(clip, {config.log_spectrogram});
      std::copy(spec.magnitudes.begin(), spec.magnitudes.end(), dst);
    }
  }
  return input;
}

Tensor<float> make_target(std::span<const signal::SquareImage* const> images) {
  require(!images.empty(), ErrorCode::kInvalidArgument, "no target images");
  const int res = images.front()->resolution;
  Tensor<float> target({static_cast<int>(images.size()), 1, res, res});
  for (std::size_t i = 0; i < images.size(); ++i) {
    require(images[i]->resolution == res, ErrorCode::kInvalidArgument,
            "mixed target resolutions in one batch");
    std::copy(images[i]->pixels.begin(), images[i]->pixels.end(),
              target.data() + i * target.shape().per_sample());
  }
  return target;
}

std::size_t parameter_count(const ParameterList<float>& params) {
  std::size_t total = 0;
  for (const auto* p : params)
    if (p->trainable) total += p->value.size();
  return total;
}

#define ECHO2DEPTH_INSTANTIATE(T)                                                   \
  template class WaveformEncoder<T>;                                                \
  template class SpectrogramEncoder<T>;                                             \
  template class UnetGenerator<T>;                                                  \
  template class DirectGenerator<T>;                                                \
  template std::unique_ptr<Sequential<T>> build_discriminator<T>(                   \
      std::span<const ConvRow>, int);                                               \
  template std::unique_ptr<Sequential<T>> build_discriminator<T>(int);              \
  template std::unique_ptr<Sequential<T>> build_generator_model<T>(const ModelConfig&);

ECHO2DEPTH_INSTANTIATE(float)
ECHO2DEPTH_INSTANTIATE(double)

#undef ECHO2DEPTH_INSTANTIATE

}  // namespace echo2depth::models
