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

#include "echo2depth/nn/layers.h"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace echo2depth::nn {
namespace {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixMap = Eigen::Map<Matrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const Matrix<T>>;

// Upper bound on the im2col buffer, in elements, before splitting a batch.
constexpr std::size_t kColumnBudget = std::size_t{1} << 23;

struct Geometry {
  int channels, height, width;   // image side
  int out_h, out_w;              // column grid
  int kh, kw, sh, sw, ph, pw;

  int positions() const { return out_h * out_w; }
  int rows() const { return channels * kh * kw; }
};

Geometry conv_geometry(const ConvSpec& s, int channels, int h, int w, int oh,
                       int ow) {
  return {channels, h, w, oh, ow, s.kernel_h, s.kernel_w,
          s.stride_h, s.stride_w, s.pad_h, s.pad_w};
}

// Writes the patch matrix of one image into columns [rows x ld] starting at
// column `offset`.
template <typename T>
void im2col(const T* image, const Geometry& g, T* columns, std::size_t ld,
            std::size_t offset) {
  for (int c = 0; c < g.channels; ++c) {
    const T* plane = image + static_cast<std::size_t>(c) * g.height * g.width;
    for (int i = 0; i < g.kh; ++i) {
      for (int j = 0; j < g.kw; ++j) {
        const std::size_t row = (static_cast<std::size_t>(c) * g.kh + i) * g.kw + j;
        T* dst = columns + row * ld + offset;
        for (int oh = 0; oh < g.out_h; ++oh) {
          const int y = oh * g.sh - g.ph + i;
          T* out = dst + static_cast<std::size_t>(oh) * g.out_w;
          if (y < 0 || y >= g.height) {
            std::fill(out, out + g.out_w, T(0));
            continue;
          }
          const T* src = plane + static_cast<std::size_t>(y) * g.width;
          for (int ow = 0; ow < g.out_w; ++ow) {
            const int x = ow * g.sw - g.pw + j;
            out[ow] = (x >= 0 && x < g.width) ? src[x] : T(0);
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatters-adds columns back into the image.
template <typename T>
void col2im(const T* columns, const Geometry& g, std::size_t ld,
            std::size_t offset, T* image) {
  for (int c = 0; c < g.channels; ++c) {
    T* plane = image + static_cast<std::size_t>(c) * g.height * g.width;
    for (int i = 0; i < g.kh; ++i) {
      for (int j = 0; j < g.kw; ++j) {
        const std::size_t row = (static_cast<std::size_t>(c) * g.kh + i) * g.kw + j;
        const T* src = columns + row * ld + offset;
        for (int oh = 0; oh < g.out_h; ++oh) {
          const int y = oh * g.sh - g.ph + i;
          if (y < 0 || y >= g.height) continue;
          T* dst = plane + static_cast<std::size_t>(y) * g.width;
          const T* in = src + static_cast<std::size_t>(oh) * g.out_w;
          for (int ow = 0; ow < g.out_w; ++ow) {
            const int x = ow * g.sw - g.pw + j;
            if (x >= 0 && x < g.width) dst[x] += in[ow];
          }
        }
      }
    }
  }
}

int chunk_size(std::size_t rows, std::size_t positions, int batch) {
  const std::size_t per = std::max<std::size_t>(1, rows * positions);
  return std::clamp(static_cast<int>(kColumnBudget / per), 1, batch);
}

template <typename T>
void normal_fill(Tensor<T>& t, std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (auto& v : t.storage()) v = static_cast<T>(dist(rng));
}

constexpr double kInitStddev = 0.02;

template <typename T>
void check_channels(const Shape& in, int expected, const char* layer) {
  require(in.c == expected, ErrorCode::kInvalidArgument,
          std::string(layer) + " expects " + std::to_string(expected) +
              " input channels, got shape " + in.str());
}

}  // namespace

int conv_output_size(int size, int kernel, int stride, int pad_begin,
                     int pad_end) {
  const int span = size + pad_begin + pad_end - kernel;
  require(stride > 0 && span >= 0, ErrorCode::kInvalidArgument,
          "convolution kernel larger than padded input");
  return span / stride + 1;
}

int transposed_output_size(int size, int kernel, int stride, int pad_begin,
                           int pad_end) {
  return (size - 1) * stride - pad_begin - pad_end + kernel;
}

std::string join_name(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "." + name;
}

// ---------------------------------------------------------------- Conv2d

template <typename T>
Conv2d<T>::Conv2d(ConvSpec spec) : spec_(spec) {
  require(spec.in_channels > 0 && spec.out_channels > 0 && spec.kernel_h > 0 &&
              spec.kernel_w > 0 && spec.stride_h > 0 && spec.stride_w > 0,
          ErrorCode::kInvalidArgument, "invalid convolution spec");
  const Shape w{spec.out_channels, spec.in_channels, spec.kernel_h, spec.kernel_w};
  weight_ = {"weight", Tensor<T>(w), Tensor<T>(w), true};
  const Shape b{1, spec.out_channels, 1, 1};
  bias_ = {"bias", Tensor<T>(b), Tensor<T>(b), true};
}

template <typename T>
Shape Conv2d<T>::output_shape(const Shape& in) const {
  check_channels<T>(in, spec_.in_channels, "conv2d");
  return {in.n, spec_.out_channels,
          conv_output_size(in.h, spec_.kernel_h, spec_.stride_h, spec_.pad_h,
                           spec_.pad_bottom()),
          conv_output_size(in.w, spec_.kernel_w, spec_.stride_w, spec_.pad_w,
                           spec_.pad_right())};
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& input, Mode mode) {
  const Shape in = input.shape();
  const Shape out_shape = output_shape(in);
  Tensor<T> out(out_shape);
  const Geometry g = conv_geometry(spec_, in.c, in.h, in.w, out_shape.h, out_shape.w);
  const std::size_t P = g.positions();
  const std::size_t K = g.rows();
  const int chunk = chunk_size(K, P, in.n);
  std::vector<T> columns;
  Matrix<T> result;
  ConstMatrixMap<T> W(weight_.value.data(), spec_.out_channels, K);
  for (int n0 = 0; n0 < in.n; n0 += chunk) {
    const int m = std::min(chunk, in.n - n0);
    const std::size_t ld = P * m;
    columns.resize(K * ld);
    for (int k = 0; k < m; ++k)
      im2col(input.data() + (n0 + k) * in.per_sample(), g, columns.data(), ld, k * P);
    result.noalias() = W * ConstMatrixMap<T>(columns.data(), K, ld);
    for (int k = 0; k < m; ++k) {
      T* dst = out.data() + (n0 + k) * out_shape.per_sample();
      for (int o = 0; o < spec_.out_channels; ++o) {
        const T b = bias_.value[o];
        const T* src = result.data() + o * ld + k * P;
        for (std::size_t p = 0; p < P; ++p) dst[o * P + p] = src[p] + b;
      }
    }
  }
  if (mode == Mode::kTrain) input_ = input;
  return out;
}

template <typename T>
Tensor<T> Conv2d<T>::backward(const Tensor<T>& grad_output) {
  require(!input_.empty(), ErrorCode::kInvalidArgument,
          "conv2d backward without a training forward pass");
  const Shape in = input_.shape();
  const Shape os = grad_output.shape();
  require(os == output_shape(in), ErrorCode::kInvalidArgument,
          "conv2d gradient shape mismatch");
  const Geometry g = conv_geometry(spec_, in.c, in.h, in.w, os.h, os.w);
  const std::size_t P = g.positions();
  const std::size_t K = g.rows();
  const int C = spec_.out_channels;
  Tensor<T> grad_input(in);
  MatrixMap<T> dW(weight_.grad.data(), C, K);
  ConstMatrixMap<T> W(weight_.value.data(), C, K);
  const int chunk = chunk_size(K, P, in.n);
  std::vector<T> columns;
  Matrix<T> dy, dcol;
  for (int n0 = 0; n0 < in.n; n0 += chunk) {
    const int m = std::min(chunk, in.n - n0);
    const std::size_t ld = P * m;
    columns.resize(K * ld);
    dy.resize(C, ld);
    for (int k = 0; k < m; ++k) {
      im2col(input_.data() + (n0 + k) * in.per_sample(), g, columns.data(), ld, k * P);
      const T* src = grad_output.data() + (n0 + k) * os.per_sample();
      for (int o = 0; o < C; ++o) {
        T sum = 0;
        for (std::size_t p = 0; p < P; ++p) {
          dy(o, k * P + p) = src[o * P + p];
          sum += src[o * P + p];
        }
        bias_.grad[o] += sum;
      }
    }
    ConstMatrixMap<T> col(columns.data(), K, ld);
    dW.noalias() += dy * col.transpose();
    dcol.noalias() = W.transpose() * dy;
    for (int k = 0; k < m; ++k)
      col2im(dcol.data(), g, ld, k * P, grad_input.data() + (n0 + k) * in.per_sample());
  }
  return grad_input;
}

template <typename T>
void Conv2d<T>::collect(const std::string& prefix, ParameterList<T>& out) {
  weight_.name = join_name(prefix, "weight");
  bias_.name = join_name(prefix, "bias");
  out.push_back(&weight_);
  out.push_back(&bias_);
}

template <typename T>
void Conv2d<T>::initialize(std::mt19937_64& rng) {
  normal_fill(weight_.value, rng, kInitStddev);
  bias_.value.fill(T(0));
}

// ------------------------------------------------------- ConvTranspose2d

template <typename T>
ConvTranspose2d<T>::ConvTranspose2d(ConvSpec spec) : spec_(spec) {
  require(spec.in_channels > 0 && spec.out_channels > 0 && spec.kernel_h > 0 &&
              spec.kernel_w > 0 && spec.stride_h > 0 && spec.stride_w > 0,
          ErrorCode::kInvalidArgument, "invalid transposed convolution spec");
  const Shape w{spec.in_channels, spec.out_channels, spec.kernel_h, spec.kernel_w};
  weight_ = {"weight", Tensor<T>(w), Tensor<T>(w), true};
  const Shape b{1, spec.out_channels, 1, 1};
  bias_ = {"bias", Tensor<T>(b), Tensor<T>(b), true};
}

template <typename T>
Shape ConvTranspose2d<T>::output_shape(const Shape& in) const {
  check_channels<T>(in, spec_.in_channels, "conv_transpose2d");
  const Shape out{in.n, spec_.out_channels,
                  transposed_output_size(in.h, spec_.kernel_h, spec_.stride_h,
                                         spec_.pad_h, spec_.pad_bottom()),
                  transposed_output_size(in.w, spec_.kernel_w, spec_.stride_w,
                                         spec_.pad_w, spec_.pad_right())};
  require(out.h > 0 && out.w > 0, ErrorCode::kInvalidArgument,
          "transposed convolution output is empty");
  return out;
}

template <typename T>
Tensor<T> ConvTranspose2d<T>::forward(const Tensor<T>& input, Mode mode) {
  const Shape in = input.shape();
  const Shape os = output_shape(in);
  Tensor<T> out(os);
  // Output is the "image" and the input grid plays the column grid.
  const Geometry g = conv_geometry(spec_, os.c, os.h, os.w, in.h, in.w);
  const std::size_t P = g.positions();
  const std::size_t K = g.rows();
  const int Cin = spec_.in_channels;
  ConstMatrixMap<T> W(weight_.value.data(), Cin, K);
  const int chunk = chunk_size(K, P, in.n);
  Matrix<T> x, col;
  for (int n0 = 0; n0 < in.n; n0 += chunk) {
    const int m = std::min(chunk, in.n - n0);
    const std::size_t ld = P * m;
    x.resize(Cin, ld);
    for (int k = 0; k < m; ++k) {
      const T* src = input.data() + (n0 + k) * in.per_sample();
      for (int c = 0; c < Cin; ++c)
        for (std::size_t p = 0; p < P; ++p) x(c, k * P + p) = src[c * P + p];
    }
    col.noalias() = W.transpose() * x;
    for (int k = 0; k < m; ++k)
      col2im(col.data(), g, ld, k * P, out.data() + (n0 + k) * os.per_sample());
  }
  const std::size_t spatial = os.spatial();
  for (int n = 0; n < os.n; ++n)
    for (int c = 0; c < os.c; ++c) {
      T* dst = out.data() + (static_cast<std::size_t>(n) * os.c + c) * spatial;
      const T b = bias_.value[c];
      for (std::size_t i = 0; i < spatial; ++i) dst[i] += b;
    }
  if (mode == Mode::kTrain) input_ = input;
  return out;
}

template <typename T>
Tensor<T> ConvTranspose2d<T>::backward(const Tensor<T>& grad_output) {
  require(!input_.empty(), ErrorCode::kInvalidArgument,
          "conv_transpose2d backward without a training forward pass");
  const Shape in = input_.shape();
  const Shape os = grad_output.shape();
  require(os == output_shape(in), ErrorCode::kInvalidArgument,
          "conv_transpose2d gradient shape mismatch");
  const Geometry g = conv_geometry(spec_, os.c, os.h, os.w, in.h, in.w);
  const std::size_t P = g.positions();
  const std::size_t K = g.rows();
  const int Cin = spec_.in_channels;
  ConstMatrixMap<T> W(weight_.value.data(), Cin, K);
  MatrixMap<T> dW(weight_.grad.data(), Cin, K);
  Tensor<T> grad_input(in);

  const std::size_t spatial = os.spatial();
  for (int n = 0; n < os.n; ++n)
    for (int c = 0; c < os.c; ++c) {
      const T* src = grad_output.data() + (static_cast<std::size_t>(n) * os.c + c) * spatial;
      T sum = 0;
      for (std::size_t i = 0; i < spatial; ++i) sum += src[i];
      bias_.grad[c] += sum;
    }

  const int chunk = chunk_size(K, P, in.n);
  std::vector<T> columns;
  Matrix<T> x, dx;
  for (int n0 = 0; n0 < in.n; n0 += chunk) {
    const int m = std::min(chunk, in.n - n0);
    const std::size_t ld = P * m;
    columns.resize(K * ld);
    x.resize(Cin, ld);
    for (int k = 0; k < m; ++k) {
      im2col(grad_output.data() + (n0 + k) * os.per_sample(), g, columns.data(), ld,
             k * P);
      const T* src = input_.data() + (n0 + k) * in.per_sample();
      for (int c = 0; c < Cin; ++c)
        for (std::size_t p = 0; p < P; ++p) x(c, k * P + p) = src[c * P + p];
    }
    ConstMatrixMap<T> col(columns.data(), K, ld);
    dW.noalias() += x * col.transpose();
    dx.noalias() = W * col;
    for (int k = 0; k < m; ++k) {
      T* dst = grad_input.data() + (n0 + k) * in.per_sample();
      for (int c = 0; c < Cin; ++c)
        for (std::size_t p = 0; p < P; ++p) dst[c * P + p] = dx(c, k * P + p);
    }
  }
  return grad_input;
}

template <typename T>
void ConvTranspose2d<T>::collect(const std::string& prefix, ParameterList<T>& out) {
  weight_.name = join_name(prefix, "weight");
  bias_.name = join_name(prefix, "bias");
  out.push_back(&weight_);
  out.push_back(&bias_);
}

template <typename T>
void ConvTranspose2d<T>::initialize(std::mt19937_64& rng) {
  normal_fill(weight_.value, rng, kInitStddev);
  bias_.value.fill(T(0));
}

// ----------------------------------------------------------- BatchNorm2d

template <typename T>
BatchNorm2d<T>::BatchNorm2d(int channels, T momentum, T epsilon)
    : channels_(channels), momentum_(momentum), epsilon_(epsilon) {
  require(channels > 0, ErrorCode::kInvalidArgument, "batch norm needs channels");
  const Shape s{1, channels, 1, 1};
  gamma_ = {"gamma", Tensor<T>(s, T(1)), Tensor<T>(s), true};
  beta_ = {"beta", Tensor<T>(s), Tensor<T>(s), true};
  running_mean_ = {"running_mean", Tensor<T>(s), Tensor<T>(s), false};
  running_var_ = {"running_var", Tensor<T>(s, T(1)), Tensor<T>(s), false};
}

template <typename T>
Tensor<T> BatchNorm2d<T>::forward(const Tensor<T>& input, Mode mode) {
  const Shape s = input.shape();
  check_channels<T>(s, channels_, "batch_norm2d");
  const std::size_t spatial = s.spatial();
  const std::size_t count = spatial * s.n;
  Tensor<T> out(s);
  auto plane = [&](int n, int c) {
    return (static_cast<std::size_t>(n) * s.c + c) * spatial;
  };
  if (mode == Mode::kEval) {
    for (int c = 0; c < s.c; ++c) {
      const T scale = gamma_.value[c] / std::sqrt(running_var_.value[c] + epsilon_);
      const T shift = beta_.value[c] - running_mean_.value[c] * scale;
      for (int n = 0; n < s.n; ++n) {
        const T* src = input.data() + plane(n, c);
        T* dst = out.data() + plane(n, c);
        for (std::size_t i = 0; i < spatial; ++i) dst[i] = src[i] * scale + shift;
      }
    }
    return out;
  }
  normalized_ = Tensor<T>(s);
  inv_std_.assign(s.c, T(0));
  for (int c = 0; c < s.c; ++c) {
    double mean = 0;
    for (int n = 0; n < s.n; ++n) {
      const T* src = input.data() + plane(n, c);
      for (std::size_t i = 0; i < spatial; ++i) mean += src[i];
    }
    mean /= static_cast<double>(count);
    double var = 0;
    for (int n = 0; n < s.n; ++n) {
      const T* src = input.data() + plane(n, c);
      for (std::size_t i = 0; i < spatial; ++i) {
        const double d = src[i] - mean;
        var += d * d;
      }
    }
    const double biased = var / static_cast<double>(count);
    const double unbiased = count > 1 ? var / static_cast<double>(count - 1) : biased;
    const T inv = static_cast<T>(1.0 / std::sqrt(biased + epsilon_));
    inv_std_[c] = inv;
    for (int n = 0; n < s.n; ++n) {
      const T* src = input.data() + plane(n, c);
      T* xhat = normalized_.data() + plane(n, c);
      T* dst = out.data() + plane(n, c);
      for (std::size_t i = 0; i < spatial; ++i) {
        xhat[i] = static_cast<T>((src[i] - mean) * inv);
        dst[i] = xhat[i] * gamma_.value[c] + beta_.value[c];
      }
    }
    running_mean_.value[c] = static_cast<T>((1 - momentum_) * running_mean_.value[c] +
                                            momentum_ * mean);
    running_var_.value[c] = static_cast<T>((1 - momentum_) * running_var_.value[c] +
                                           momentum_ * unbiased);
  }
  return out;
}

template <typename T>
Tensor<T> BatchNorm2d<T>::backward(const Tensor<T>& grad_output) {
  const Shape s = grad_output.shape();
  require(s == normalized_.shape(), ErrorCode::kInvalidArgument,
          "batch norm backward without a matching training forward pass");
  const std::size_t spatial = s.spatial();
  const double count = static_cast<double>(spatial * s.n);
  Tensor<T> grad_input(s);
  for (int c = 0; c < s.c; ++c) {
    double sum_dy = 0, sum_dy_xhat = 0;
    for (int n = 0; n < s.n; ++n) {
      const std::size_t base = (static_cast<std::size_t>(n) * s.c + c) * spatial;
      for (std::size_t i = 0; i < spatial; ++i) {
        sum_dy += grad_output[base + i];
        sum_dy_xhat += grad_output[base + i] * normalized_[base + i];
      }
    }
    gamma_.grad[c] += static_cast<T>(sum_dy_xhat);
    beta_.grad[c] += static_cast<T>(sum_dy);
    const double k = gamma_.value[c] * inv_std_[c];
    const double mean_dy = sum_dy / count;
    const double mean_dy_xhat = sum_dy_xhat / count;
    for (int n = 0; n < s.n; ++n) {
      const std::size_t base = (static_cast<std::size_t>(n) * s.c + c) * spatial;
      for (std::size_t i = 0; i < spatial; ++i) {
        grad_input[base + i] = static_cast<T>(
            k * (grad_output[base + i] - mean_dy - normalized_[base + i] * mean_dy_xhat));
      }
    }
  }
  return grad_input;
}

template <typename T>
void BatchNorm2d<T>::collect(const std::string& prefix, ParameterList<T>& out) {
  gamma_.name = join_name(prefix, "gamma");
  beta_.name = join_name(prefix, "beta");
  running_mean_.name = join_name(prefix, "running_mean");
  running_var_.name = join_name(prefix, "running_var");
  out.push_back(&gamma_);
  out.push_back(&beta_);
  out.push_back(&running_mean_);
  out.push_back(&running_var_);
}

template <typename T>
void BatchNorm2d<T>::initialize(std::mt19937_64&) {
  gamma_.value.fill(T(1));
  beta_.value.fill(T(0));
  running_mean_.value.fill(T(0));
  running_var_.value.fill(T(1));
}

// ------------------------------------------------------ pointwise layers

template <typename T>
Tensor<T> LeakyRelu<T>::forward(const Tensor<T>& input, Mode mode) {
  Tensor<T> out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i)
    out[i] = input[i] > T(0) ? input[i] : slope_ * input[i];
  if (mode == Mode::kTrain) input_ = input;
  return out;
}

template <typename T>
Tensor<T> LeakyRelu<T>::backward(const Tensor<T>& grad_output) {
  require(grad_output.shape() == input_.shape(), ErrorCode::kInvalidArgument,
          "leaky relu gradient shape mismatch");
  Tensor<T> grad(grad_output.shape());
  for (std::size_t i = 0; i < grad.size(); ++i)
    grad[i] = input_[i] > T(0) ? grad_output[i] : slope_ * grad_output[i];
  return grad;
}

template <typename T>
Tensor<T> Sigmoid<T>::forward(const Tensor<T>& input, Mode mode) {
  Tensor<T> out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i)
    out[i] = T(1) / (T(1) + std::exp(-input[i]));
  if (mode == Mode::kTrain) output_ = out;
  return out;
}

template <typename T>
Tensor<T> Sigmoid<T>::backward(const Tensor<T>& grad_output) {
  require(grad_output.shape() == output_.shape(), ErrorCode::kInvalidArgument,
          "sigmoid gradient shape mismatch");
  Tensor<T> grad(grad_output.shape());
  for (std::size_t i = 0; i < grad.size(); ++i)
    grad[i] = grad_output[i] * output_[i] * (T(1) - output_[i]);
  return grad;
}

// ---------------------------------------------------------------- Linear

template <typename T>
Linear<T>::Linear(int in_features, int out_features)
    : in_features_(in_features), out_features_(out_features) {
  require(in_features > 0 && out_features > 0, ErrorCode::kInvalidArgument,
          "linear layer needs positive sizes");
  const Shape w{1, 1, out_features, in_features};
  weight_ = {"weight", Tensor<T>(w), Tensor<T>(w), true};
  const Shape b{1, out_features, 1, 1};
  bias_ = {"bias", Tensor<T>(b), Tensor<T>(b), true};
}

template <typename T>
Shape Linear<T>::output_shape(const Shape& in) const {
  require(static_cast<int>(in.per_sample()) == in_features_,
          ErrorCode::kInvalidArgument,
          "linear layer expects " + std::to_string(in_features_) +
              " features, got shape " + in.str());
  return {in.n, out_features_, 1, 1};
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& input, Mode mode) {
  const Shape os = output_shape(input.shape());
  Tensor<T> out(os);
  ConstMatrixMap<T> X(input.data(), os.n, in_features_);
  ConstMatrixMap<T> W(weight_.value.data(), out_features_, in_features_);
  MatrixMap<T> Y(out.data(), os.n, out_features_);
  Y.noalias() = X * W.transpose();
  for (int n = 0; n < os.n; ++n)
    for (int o = 0; o < out_features_; ++o) Y(n, o) += bias_.value[o];
  if (mode == Mode::kTrain) input_ = input;
  return out;
}

template <typename T>
Tensor<T> Linear<T>::backward(const Tensor<T>& grad_output) {
  const Shape in = input_.shape();
  require(grad_output.shape() == output_shape(in), ErrorCode::kInvalidArgument,
          "linear gradient shape mismatch");
  ConstMatrixMap<T> X(input_.data(), in.n, in_features_);
  ConstMatrixMap<T> dY(grad_output.data(), in.n, out_features_);
  ConstMatrixMap<T> W(weight_.value.data(), out_features_, in_features_);
  MatrixMap<T> dW(weight_.grad.data(), out_features_, in_features_);
  dW.noalias() += dY.transpose() * X;
  for (int n = 0; n < in.n; ++n)
    for (int o = 0; o < out_features_; ++o) bias_.grad[o] += dY(n, o);
  Tensor<T> grad_input(in);
  MatrixMap<T> dX(grad_input.data(), in.n, in_features_);
  dX.noalias() = dY * W;
  return grad_input;
}

template <typename T>
void Linear<T>::collect(const std::string& prefix, ParameterList<T>& out) {
  weight_.name = join_name(prefix, "weight");
  bias_.name = join_name(prefix, "bias");
  out.push_back(&weight_);
  out.push_back(&bias_);
}

template <typename T>
void Linear<T>::initialize(std::mt19937_64& rng) {
  normal_fill(weight_.value, rng, kInitStddev);
  bias_.value.fill(T(0));
}

// ------------------------------------------------------------- MaxPool2d

template <typename T>
Shape MaxPool2d<T>::output_shape(const Shape& in) const {
  require(in.h % window_ == 0 && in.w % window_ == 0, ErrorCode::kInvalidArgument,
          "max pool window does not tile " + in.str());
  return {in.n, in.c, in.h / window_, in.w / window_};
}

template <typename T>
Tensor<T> MaxPool2d<T>::forward(const Tensor<T>& input, Mode mode) {
  const Shape in = input.shape();
  const Shape os = output_shape(in);
  Tensor<T> out(os);
  std::vector<std::size_t> argmax(os.count());
  std::size_t o = 0;
  for (int n = 0; n < in.n; ++n)
    for (int c = 0; c < in.c; ++c)
      for (int y = 0; y < os.h; ++y)
        for (int x = 0; x < os.w; ++x, ++o) {
          T best = -std::numeric_limits<T>::infinity();
          std::size_t at = 0;
          for (int i = 0; i < window_; ++i)
            for (int j = 0; j < window_; ++j) {
              const std::size_t idx =
                  ((static_cast<std::size_t>(n) * in.c + c) * in.h + y * window_ + i) *
                      in.w +
                  x * window_ + j;
              if (input[idx] > best) {
                best = input[idx];
                at = idx;
              }
            }
          out[o] = best;
          argmax[o] = at;
        }
  if (mode == Mode::kTrain) {
    input_shape_ = in;
    argmax_ = std::move(argmax);
  }
  return out;
}

template <typename T>
Tensor<T> MaxPool2d<T>::backward(const Tensor<T>& grad_output) {
  require(grad_output.size() == argmax_.size(), ErrorCode::kInvalidArgument,
          "max pool gradient shape mismatch");
  Tensor<T> grad(input_shape_);
  for (std::size_t i = 0; i < argmax_.size(); ++i) grad[argmax_[i]] += grad_output[i];
  return grad;
}

// ------------------------------------------------- AdaptiveAvgPoolHeight

template <typename T>
Shape AdaptiveAvgPoolHeight<T>::output_shape(const Shape& in) const {
  require(out_height_ > 0 && in.h >= out_height_, ErrorCode::kInvalidArgument,
          "adaptive pool cannot grow height " + in.str());
  return {in.n, in.c, out_height_, in.w};
}

template <typename T>
Tensor<T> AdaptiveAvgPoolHeight<T>::forward(const Tensor<T>& input, Mode mode) {
  const Shape in = input.shape();
  const Shape os = output_shape(in);
  Tensor<T> out(os);
  for (int n = 0; n < in.n; ++n)
    for (int c = 0; c < in.c; ++c)
      for (int i = 0; i < out_height_; ++i) {
        const int lo = (i * in.h) / out_height_;
        const int hi = ((i + 1) * in.h + out_height_ - 1) / out_height_;
        for (int x = 0; x < in.w; ++x) {
          T sum = 0;
          for (int y = lo; y < hi; ++y) sum += input.at(n, c, y, x);
          out.at(n, c, i, x) = sum / static_cast<T>(hi - lo);
        }
      }
  if (mode == Mode::kTrain) input_shape_ = in;
  return out;
}

template <typename T>
Tensor<T> AdaptiveAvgPoolHeight<T>::backward(const Tensor<T>& grad_output) {
  const Shape in = input_shape_;
  require(grad_output.shape() == output_shape(in), ErrorCode::kInvalidArgument,
          "adaptive pool gradient shape mismatch");
  Tensor<T> grad(in);
  for (int n = 0; n < in.n; ++n)
    for (int c = 0; c < in.c; ++c)
      for (int i = 0; i < out_height_; ++i) {
        const int lo = (i * in.h) / out_height_;
        const int hi = ((i + 1) * in.h + out_height_ - 1) / out_height_;
        const T scale = T(1) / static_cast<T>(hi - lo);
        for (int x = 0; x < in.w; ++x) {
          const T g = grad_output.at(n, c, i, x) * scale;
          for (int y = lo; y < hi; ++y) grad.at(n, c, y, x) += g;
        }
      }
  return grad;
}

// --------------------------------------------------------------- Reshape

template <typename T>
Shape Reshape<T>::output_shape(const Shape& in) const {
  const Shape out{in.n, c_, h_, w_};
  require(out.per_sample() == in.per_sample(), ErrorCode::kInvalidArgument,
          "cannot reshape " + in.str() + " to " + out.str());
  return out;
}

template <typename T>
Tensor<T> Reshape<T>::forward(const Tensor<T>& input, Mode mode) {
  if (mode == Mode::kTrain) input_shape_ = input.shape();
  return input.reshaped(output_shape(input.shape()));
}

template <typename T>
Tensor<T> Reshape<T>::backward(const Tensor<T>& grad_output) {
  return grad_output.reshaped(input_shape_);
}

// ------------------------------------------------------------ Sequential

template <typename T>
Tensor<T> Sequential<T>::forward(const Tensor<T>& input, Mode mode) {
  Tensor<T> x = input;
  for (auto& layer : layers_) x = layer->forward(x, mode);
  return x;
}

template <typename T>
Tensor<T> Sequential<T>::backward(const Tensor<T>& grad_output) {
  Tensor<T> g = grad_output;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
  return g;
}

template <typename T>
Shape Sequential<T>::output_shape(const Shape& input) const {
  Shape s = input;
  for (const auto& layer : layers_) s = layer->output_shape(s);
  return s;
}

template <typename T>
void Sequential<T>::collect(const std::string& prefix, ParameterList<T>& out) {
  for (std::size_t i = 0; i < layers_.size(); ++i)
    layers_[i]->collect(join_name(prefix, names_[i]), out);
}

template <typename T>
void Sequential<T>::initialize(std::mt19937_64& rng) {
  for (auto& layer : layers_) layer->initialize(rng);
}

// --------------------------------------------------------------- helpers

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  const Shape sa = a.shape(), sb = b.shape();
  require(sa.n == sb.n && sa.h == sb.h && sa.w == sb.w, ErrorCode::kInvalidArgument,
          "cannot concatenate " + sa.str() + " and " + sb.str());
  Tensor<T> out({sa.n, sa.c + sb.c, sa.h, sa.w});
  for (int n = 0; n < sa.n; ++n) {
    T* dst = out.data() + n * out.shape().per_sample();
    std::copy_n(a.data() + n * sa.per_sample(), sa.per_sample(), dst);
    std::copy_n(b.data() + n * sb.per_sample(), sb.per_sample(), dst + sa.per_sample());
  }
  return out;
}

template <typename T>
void split_channels(const Tensor<T>& joined, int first_channels, Tensor<T>& a,
                    Tensor<T>& b) {
  const Shape s = joined.shape();
  require(first_channels > 0 && first_channels < s.c, ErrorCode::kInvalidArgument,
          "invalid channel split");
  const Shape sa{s.n, first_channels, s.h, s.w};
  const Shape sb{s.n, s.c - first_channels, s.h, s.w};
  a = Tensor<T>(sa);
  b = Tensor<T>(sb);
  for (int n = 0; n < s.n; ++n) {
    const T* src = joined.data() + n * s.per_sample();
    std::copy_n(src, sa.per_sample(), a.data() + n * sa.per_sample());
    std::copy_n(src + sa.per_sample(), sb.per_sample(), b.data() + n * sb.per_sample());
  }
}

template <typename T>
void add_into(Tensor<T>& a, const Tensor<T>& b) {
  require(a.shape() == b.shape(), ErrorCode::kInvalidArgument,
          "cannot add " + b.shape().str() + " into " + a.shape().str());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

#define ECHO2DEPTH_INSTANTIATE(T)                                             \
  template class Conv2d<T>;                                                   \
  template class ConvTranspose2d<T>;                                          \
  template class BatchNorm2d<T>;                                              \
  template class LeakyRelu<T>;                                                \
  template class Sigmoid<T>;                                                  \
  template class Linear<T>;                                                   \
  template class MaxPool2d<T>;                                                \
  template class AdaptiveAvgPoolHeight<T>;                                    \
  template class Reshape<T>;                                                  \
  template class Sequential<T>;                                               \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);     \
  template void split_channels(const Tensor<T>&, int, Tensor<T>&, Tensor<T>&); \
  template void add_into(Tensor<T>&, const Tensor<T>&);

ECHO2DEPTH_INSTANTIATE(float)
ECHO2DEPTH_INSTANTIATE(double)

#undef ECHO2DEPTH_INSTANTIATE

}  // namespace echo2depth::nn
