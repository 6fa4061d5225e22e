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

#ifndef ECHO2DEPTH_TESTS_SUPPORT_ORACLES_H_
#define ECHO2DEPTH_TESTS_SUPPORT_ORACLES_H_

// Slow, direct reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "echo2depth/nn/layers.h"
#include "echo2depth/scene.h"

namespace echo2depth::oracle {

// Image sources of a shoebox room found by mirroring the emitter across the
// six walls in every sequence of at most `max_order` reflections (no wall
// twice in a row). Duplicates collapse onto the shortest sequence.
struct Image {
  sim::Vec3 position;
  int order;
};

inline std::vector<Image> mirror_images(const sim::RoomScene& scene, int max_order) {
  std::vector<Image> found{{scene.emitter, 0}};
  std::function<void(const sim::Vec3&, int, int)> recurse = [&](const sim::Vec3& p,
                                                                 int last, int depth) {
    if (depth == max_order) return;
    for (int wall = 0; wall < 6; ++wall) {
      if (wall == last) continue;
      const int axis = wall / 2;
      const double plane = wall % 2 == 0 ? 0.0 : scene.room_size[axis];
      sim::Vec3 q = p;
      q[axis] = 2.0 * plane - p[axis];
      auto same = [&](const Image& im) { return (im.position - q).norm() < 1e-9; };
      auto it = std::find_if(found.begin(), found.end(), same);
      if (it == found.end()) {
        found.push_back({q, depth + 1});
      } else {
        it->order = std::min(it->order, depth + 1);
      }
      recurse(q, wall, depth + 1);
    }
  };
  recurse(scene.emitter, -1, 0);
  return found;
}

// numpy-style reflection (edge sample not repeated).
inline int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

// Centered STFT magnitude by a direct DFT: frame t is centered on sample
// t * hop, the periodic Hann window of `window` taps sits in the middle of an
// `nfft` frame. Returns [bin][frame].
inline std::vector<double> dft_stft(const std::vector<float>& x, int nfft, int window,
                                    int hop) {
  const int n = static_cast<int>(x.size());
  const int frames = (n + hop - 1) / hop;
  const int bins = nfft / 2 + 1;
  std::vector<double> hann(window);
  for (int j = 0; j < window; ++j)
    hann[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * j / window);
  const int offset = (nfft - window) / 2;
  std::vector<double> out(static_cast<std::size_t>(bins) * frames);
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k < bins; ++k) {
      std::complex<double> acc = 0;
      for (int j = 0; j < window; ++j) {
        const int m = offset + j;
        const double v = x[reflect(t * hop - nfft / 2 + m, n)] * hann[j];
        acc += v * std::polar(1.0, -2.0 * std::numbers::pi * k * m / nfft);
      }
      out[static_cast<std::size_t>(k) * frames + t] = std::abs(acc);
    }
  }
  return out;
}

// Direct cross-correlation convolution.
template <typename T>
nn::Tensor<T> direct_conv(const nn::Tensor<T>& x, const nn::Tensor<T>& w,
                          const nn::Tensor<T>& b, const nn::ConvSpec& s) {
  const auto& in = x.shape();
  const int oh = nn::conv_output_size(in.h, s.kernel_h, s.stride_h, s.pad_h, s.pad_bottom());
  const int ow = nn::conv_output_size(in.w, s.kernel_w, s.stride_w, s.pad_w, s.pad_right());
  nn::Tensor<T> y({in.n, s.out_channels, oh, ow});
  for (int n = 0; n < in.n; ++n)
    for (int o = 0; o < s.out_channels; ++o)
      for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j) {
          double acc = b[o];
          for (int c = 0; c < in.c; ++c)
            for (int ki = 0; ki < s.kernel_h; ++ki)
              for (int kj = 0; kj < s.kernel_w; ++kj) {
                const int r = i * s.stride_h - s.pad_h + ki;
                const int q = j * s.stride_w - s.pad_w + kj;
                if (r < 0 || r >= in.h || q < 0 || q >= in.w) continue;
                acc += static_cast<double>(x.at(n, c, r, q)) * w.at(o, c, ki, kj);
              }
          y.at(n, o, i, j) = static_cast<T>(acc);
        }
  return y;
}

// Transposed convolution by scattering every input pixel.
template <typename T>
nn::Tensor<T> direct_conv_transpose(const nn::Tensor<T>& x, const nn::Tensor<T>& w,
                                    const nn::Tensor<T>& b, const nn::ConvSpec& s) {
  const auto& in = x.shape();
  const int oh = nn::transposed_output_size(in.h, s.kernel_h, s.stride_h, s.pad_h,
                                            s.pad_bottom());
  const int ow = nn::transposed_output_size(in.w, s.kernel_w, s.stride_w, s.pad_w,
                                            s.pad_right());
  std::vector<double> acc(static_cast<std::size_t>(in.n) * s.out_channels * oh * ow, 0.0);
  auto at = [&](int n, int o, int r, int q) -> double& {
    return acc[((static_cast<std::size_t>(n) * s.out_channels + o) * oh + r) * ow + q];
  };
  for (int n = 0; n < in.n; ++n)
    for (int c = 0; c < in.c; ++c)
      for (int i = 0; i < in.h; ++i)
        for (int j = 0; j < in.w; ++j)
          for (int o = 0; o < s.out_channels; ++o)
            for (int ki = 0; ki < s.kernel_h; ++ki)
              for (int kj = 0; kj < s.kernel_w; ++kj) {
                const int r = i * s.stride_h - s.pad_h + ki;
                const int q = j * s.stride_w - s.pad_w + kj;
                if (r < 0 || r >= oh || q < 0 || q >= ow) continue;
                at(n, o, r, q) += static_cast<double>(x.at(n, c, i, j)) * w.at(c, o, ki, kj);
              }
  nn::Tensor<T> y({in.n, s.out_channels, oh, ow});
  for (int n = 0; n < in.n; ++n)
    for (int o = 0; o < s.out_channels; ++o)
      for (int r = 0; r < oh; ++r)
        for (int q = 0; q < ow; ++q) y.at(n, o, r, q) = static_cast<T>(at(n, o, r, q) + b[o]);
  return y;
}

template <typename T>
nn::Tensor<T> random_tensor(nn::Shape shape, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  nn::Tensor<T> t(shape);
  for (auto& v : t.storage()) v = static_cast<T>(u(rng));
  return t;
}

// Largest relative error max|a - n| / max(|a|, |n|, floor) between analytic
// gradients and central differences of `loss` for every entry of `values`.
struct GradientReport {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
};

inline GradientReport check_gradient(std::vector<double>& values,
                                     const std::vector<double>& analytic,
                                     const std::function<double()>& loss,
                                     double step = 1e-6, double floor = 1e-6,
                                     std::size_t max_entries = 0) {
  GradientReport report;
  const std::size_t count =
      max_entries == 0 ? values.size() : std::min(values.size(), max_entries);
  const std::size_t stride = std::max<std::size_t>(1, values.size() / std::max<std::size_t>(count, 1));
  for (std::size_t i = 0; i < values.size() && report.checked < count; i += stride) {
    const double saved = values[i];
    values[i] = saved + step;
    const double up = loss();
    values[i] = saved - step;
    const double down = loss();
    values[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), floor});
    report.max_relative_error =
        std::max(report.max_relative_error, std::abs(numeric - analytic[i]) / denom);
    ++report.checked;
  }
  return report;
}

}  // namespace echo2depth::oracle

#endif  // ECHO2DEPTH_TESTS_SUPPORT_ORACLES_H_
