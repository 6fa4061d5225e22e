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

#ifndef ECHO2DEPTH_NN_LAYERS_H_
#define ECHO2DEPTH_NN_LAYERS_H_

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "echo2depth/nn/tensor.h"

namespace echo2depth::nn {

enum class Mode { kTrain, kEval };

// A differentiable operation. forward() caches what backward() needs when
// called in kTrain mode; backward() accumulates into parameter gradients and
// returns the gradient with respect to the last forward input.
template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;

  virtual Tensor<T> forward(const Tensor<T>& input, Mode mode) = 0;
  virtual Tensor<T> backward(const Tensor<T>& grad_output) = 0;
  virtual Shape output_shape(const Shape& input) const = 0;

  virtual void collect(const std::string& /*prefix*/,
                       ParameterList<T>& /*out*/) {}
  virtual void initialize(std::mt19937_64& /*rng*/) {}
};

// Kernel/stride/padding along height and width. pad_h/pad_w pad the start
// of each axis; the *_end fields pad the far side and default to the same
// amount (-1).
struct ConvSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  int stride_h = 1;
  int stride_w = 1;
  int pad_h = 0;
  int pad_w = 0;
  int pad_h_end = -1;
  int pad_w_end = -1;

  int pad_bottom() const { return pad_h_end < 0 ? pad_h : pad_h_end; }
  int pad_right() const { return pad_w_end < 0 ? pad_w : pad_w_end; }
  int patch_size() const { return in_channels * kernel_h * kernel_w; }

  // 1-D convolution along the width axis (height stays 1).
  static ConvSpec temporal(int in, int out, int kernel, int stride, int pad) {
    return {in, out, 1, kernel, 1, stride, 0, pad, -1, -1};
  }
  static ConvSpec square(int in, int out, int kernel, int stride, int pad) {
    return {in, out, kernel, kernel, stride, stride, pad, pad, -1, -1};
  }
};

// floor((size + pad_begin + pad_end - kernel) / stride) + 1
int conv_output_size(int size, int kernel, int stride, int pad_begin,
                     int pad_end);
// (size - 1) stride - pad_begin - pad_end + kernel
int transposed_output_size(int size, int kernel, int stride, int pad_begin,
                           int pad_end);

template <typename T>
class Conv2d : public Layer<T> {
 public:
  explicit Conv2d(ConvSpec spec);

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;
  void collect(const std::string& prefix, ParameterList<T>& out) override;
  void initialize(std::mt19937_64& rng) override;

  const ConvSpec& spec() const { return spec_; }
  Parameter<T>& weight() { return weight_; }
  Parameter<T>& bias() { return bias_; }

 private:
  ConvSpec spec_;
  Parameter<T> weight_;  // [out, in, kh, kw]
  Parameter<T> bias_;    // [1, out, 1, 1]
  Tensor<T> input_;
};

// Weight layout [in, out, kh, kw]; the adjoint of Conv2d with the same spec.
template <typename T>
class ConvTranspose2d : public Layer<T> {
 public:
  explicit ConvTranspose2d(ConvSpec spec);

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;
  void collect(const std::string& prefix, ParameterList<T>& out) override;
  void initialize(std::mt19937_64& rng) override;

  const ConvSpec& spec() const { return spec_; }
  Parameter<T>& weight() { return weight_; }
  Parameter<T>& bias() { return bias_; }

 private:
  ConvSpec spec_;
  Parameter<T> weight_;
  Parameter<T> bias_;
  Tensor<T> input_;
};

template <typename T>
class BatchNorm2d : public Layer<T> {
 public:
  explicit BatchNorm2d(int channels, T momentum = T(0.1), T epsilon = T(1e-5));

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override { return input; }
  void collect(const std::string& prefix, ParameterList<T>& out) override;
  void initialize(std::mt19937_64& rng) override;

 private:
  int channels_;
  T momentum_;
  T epsilon_;
  Parameter<T> gamma_;
  Parameter<T> beta_;
  Parameter<T> running_mean_;
  Parameter<T> running_var_;
  Tensor<T> normalized_;
  std::vector<T> inv_std_;
};

// slope 0 gives a plain ReLU.
template <typename T>
class LeakyRelu : public Layer<T> {
 public:
  explicit LeakyRelu(T slope = T(0.2)) : slope_(slope) {}

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override { return input; }

 private:
  T slope_;
  Tensor<T> input_;
};

template <typename T>
class Sigmoid : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override { return input; }

 private:
  Tensor<T> output_;
};

// Flattens each sample to C*H*W features; output [N, out, 1, 1].
template <typename T>
class Linear : public Layer<T> {
 public:
  Linear(int in_features, int out_features);

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;
  void collect(const std::string& prefix, ParameterList<T>& out) override;
  void initialize(std::mt19937_64& rng) override;

 private:
  int in_features_;
  int out_features_;
  Parameter<T> weight_;  // [out, in]
  Parameter<T> bias_;
  Tensor<T> input_;
};

// Non-overlapping max pooling with a square window.
template <typename T>
class MaxPool2d : public Layer<T> {
 public:
  explicit MaxPool2d(int window = 2) : window_(window) {}

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;

 private:
  int window_;
  Shape input_shape_;
  std::vector<std::size_t> argmax_;
};

// Adaptive average pooling of the height axis to `out_height` bins
// (bin i spans [floor(i H / out), ceil((i + 1) H / out))); width untouched.
template <typename T>
class AdaptiveAvgPoolHeight : public Layer<T> {
 public:
  explicit AdaptiveAvgPoolHeight(int out_height) : out_height_(out_height) {}

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;

 private:
  int out_height_;
  Shape input_shape_;
};

// Reinterprets each sample as [c, h, w].
template <typename T>
class Reshape : public Layer<T> {
 public:
  Reshape(int c, int h, int w) : c_(c), h_(h), w_(w) {}

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;

 private:
  int c_, h_, w_;
  Shape input_shape_;
};

template <typename T>
class Sequential : public Layer<T> {
 public:
  Sequential() = default;

  // Returns a reference to the added layer.
  template <typename L>
  L& add(std::string name, std::unique_ptr<L> layer) {
    L& ref = *layer;
    names_.push_back(std::move(name));
    layers_.push_back(std::move(layer));
    return ref;
  }
  template <typename L, typename... Args>
  L& emplace(std::string name, Args&&... args) {
    return add(std::move(name), std::make_unique<L>(std::forward<Args>(args)...));
  }

  Tensor<T> forward(const Tensor<T>& input, Mode mode) override;
  Tensor<T> backward(const Tensor<T>& grad_output) override;
  Shape output_shape(const Shape& input) const override;
  void collect(const std::string& prefix, ParameterList<T>& out) override;
  void initialize(std::mt19937_64& rng) override;

  std::size_t size() const { return layers_.size(); }
  Layer<T>& layer(std::size_t i) { return *layers_[i]; }
  const Layer<T>& layer(std::size_t i) const { return *layers_[i]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

// Channel concatenation of two equally sized NCHW tensors, and its inverse
// for gradients.
template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
void split_channels(const Tensor<T>& joined, int first_channels, Tensor<T>& a,
                    Tensor<T>& b);

// Sum of b into a (gradient accumulation for shared inputs).
template <typename T>
void add_into(Tensor<T>& a, const Tensor<T>& b);

std::string join_name(const std::string& prefix, const std::string& name);

}  // namespace echo2depth::nn

#endif  // ECHO2DEPTH_NN_LAYERS_H_
