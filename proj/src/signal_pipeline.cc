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

#include "echo2depth/signal_pipeline.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include "echo2depth/error.h"

namespace echo2depth::signal {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool within_unit_range(std::span<const float> samples) {
  return std::all_of(samples.begin(), samples.end(), [](float v) {
    return std::isfinite(v) && std::abs(v) <= 1.0f;
  });
}

// FFTW plans are created once; execution on caller-owned buffers is
// reentrant.
fftwf_plan r2c_plan() {
  static std::once_flag once;
  static fftwf_plan plan = nullptr;
  std::call_once(once, [] {
    float* in = fftwf_alloc_real(kFftSize);
    fftwf_complex* out = fftwf_alloc_complex(kFrequencyBins);
    plan = fftwf_plan_dft_r2c_1d(kFftSize, in, out,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftwf_free(in);
    fftwf_free(out);
  });
  return plan;
}

std::vector<float> periodic_hann(int length) {
  std::vector<float> window(length);
  for (int n = 0; n < length; ++n) {
    window[n] = static_cast<float>(0.5 - 0.5 * std::cos(kTwoPi * n / length));
  }
  return window;
}

// numpy-style "reflect" index (edge sample not repeated).
int reflect_index(int index, int size) {
  while (index < 0 || index >= size) {
    if (index < 0) index = -index;
    if (index >= size) index = 2 * (size - 1) - index;
  }
  return index;
}

}  // namespace

void validate(const Waveform& waveform) {
  require(waveform.sample_rate > 0, ErrorCode::kInvalidArgument,
          "waveform sample rate must be positive");
  require(within_unit_range(waveform.samples), ErrorCode::kInvalidArgument,
          "waveform samples must be finite and within [-1, 1]");
}

void validate(const BinauralClip& clip) {
  require(clip.left.size() == kClipSamples && clip.right.size() == kClipSamples,
          ErrorCode::kInvalidArgument,
          "binaural clip channels must hold exactly 3200 samples");
  require(within_unit_range(clip.left) && within_unit_range(clip.right),
          ErrorCode::kInvalidArgument,
          "binaural clip samples must be finite and within [-1, 1]");
}

void validate(const SquareImage& image) {
  require(image.resolution > 0 &&
              image.pixels.size() == static_cast<std::size_t>(image.resolution) *
                                         image.resolution,
          ErrorCode::kInvalidArgument, "image is not square");
  require(std::all_of(image.pixels.begin(), image.pixels.end(),
                      [](float v) { return v >= 0.0f && v <= 1.0f; }),
          ErrorCode::kInvalidArgument, "image values must lie in [0, 1]");
}

double linear_chirp_phase(double t, double f_start, double f_end,
                          double duration) {
  return f_start * t + (f_end - f_start) * t * t / (2.0 * duration);
}

Waveform synthesize_chirp(double f_start, double f_end, double duration,
                          double sample_rate) {
  require(sample_rate > 0 && duration > 0, ErrorCode::kInvalidArgument,
          "chirp duration and sample rate must be positive");
  require(f_start > 0 && f_start < f_end, ErrorCode::kInvalidArgument,
          "chirp requires 0 < f_start < f_end");
  require(f_end <= sample_rate / 2, ErrorCode::kInvalidArgument,
          "chirp end frequency exceeds Nyquist");
  const auto length = static_cast<int>(std::lround(duration * sample_rate));
  require(length > 0, ErrorCode::kInvalidArgument, "chirp has no samples");

  std::vector<double> raw(length);
  double peak = 0.0;
  for (int n = 0; n < length; ++n) {
    const double t = n / sample_rate;
    raw[n] = std::sin(kTwoPi * linear_chirp_phase(t, f_start, f_end, duration));
    peak = std::max(peak, std::abs(raw[n]));
  }
  Waveform chirp;
  chirp.sample_rate = sample_rate;
  chirp.samples.resize(length);
  for (int n = 0; n < length; ++n) {
    chirp.samples[n] = peak > 0 ? static_cast<float>(raw[n] / peak) : 0.0f;
  }
  return chirp;
}

std::vector<double> normalized_cross_correlation(
    const BinauralRecording& recording, const Waveform& chirp) {
  const int n = recording.size();
  const int m = chirp.size();
  require(recording.right.size() == recording.left.size(),
          ErrorCode::kInvalidArgument, "recording channels differ in length");
  require(m > 0 && n > m, ErrorCode::kInvalidArgument,
          "recording must be longer than the chirp");

  std::vector<double> mono(n);
  for (int i = 0; i < n; ++i) {
    mono[i] = 0.5 * (static_cast<double>(recording.left[i]) + recording.right[i]);
  }
  double template_energy = 0.0;
  for (float c : chirp.samples) template_energy += static_cast<double>(c) * c;
  const double template_norm = std::sqrt(template_energy);

  std::vector<double> ncc(n - m + 1, 0.0);
  double window_energy = 0.0;
  for (int i = 0; i < m; ++i) window_energy += mono[i] * mono[i];
  for (int lag = 0; lag + m <= n; ++lag) {
    if (lag > 0) {
      window_energy += mono[lag + m - 1] * mono[lag + m - 1] -
                       mono[lag - 1] * mono[lag - 1];
      window_energy = std::max(window_energy, 0.0);
    }
    double dot = 0.0;
    for (int i = 0; i < m; ++i) dot += mono[lag + i] * chirp.samples[i];
    const double denom = std::sqrt(window_energy) * template_norm;
    ncc[lag] = denom > 1e-12 ? dot / denom : 0.0;
  }
  return ncc;
}

int locate_chirp_onset(const BinauralRecording& recording,
                       const Waveform& chirp, double min_correlation) {
  const auto ncc = normalized_cross_correlation(recording, chirp);
  const auto peak = std::max_element(ncc.begin(), ncc.end());
  require(*peak >= min_correlation, ErrorCode::kNoChirp,
          "no chirp found (peak correlation " + std::to_string(*peak) + ")");
  return static_cast<int>(peak - ncc.begin());
}

BinauralClip extract_window(const BinauralRecording& recording, int onset) {
  require(recording.right.size() == recording.left.size(),
          ErrorCode::kInvalidArgument, "recording channels differ in length");
  require(onset >= 0 && onset + kClipSamples <= recording.size(),
          ErrorCode::kOutOfRange,
          "window [" + std::to_string(onset) + ", " +
              std::to_string(onset + kClipSamples) +
              ") exceeds recording of " + std::to_string(recording.size()) +
              " samples");
  BinauralClip clip;
  clip.sample_rate = recording.sample_rate;
  clip.onset_index = onset;
  clip.left.assign(recording.left.begin() + onset,
                   recording.left.begin() + onset + kClipSamples);
  clip.right.assign(recording.right.begin() + onset,
                    recording.right.begin() + onset + kClipSamples);
  return clip;
}

JitteredClip jitter_window(const BinauralRecording& recording, int onset,
                           std::mt19937_64& rng, int chirp_length) {
  require(chirp_length > 0 && chirp_length <= kClipSamples,
          ErrorCode::kInvalidArgument, "invalid chirp length");
  std::uniform_int_distribution<int> shift(-kMaxJitterSamples,
                                           kMaxJitterSamples);
  JitteredClip result;
  result.drawn_shift = shift(rng);

  const int lowest = std::max(0, onset + chirp_length - kClipSamples);
  const int highest = std::min(onset, recording.size() - kClipSamples);
  require(lowest <= highest, ErrorCode::kOutOfRange,
          "recording too short to keep the chirp inside a jittered window");
  const int start = std::clamp(onset + result.drawn_shift, lowest, highest);
  result.applied_shift = start - onset;
  result.clip = extract_window(recording, start);
  result.clip.onset_index = onset;
  return result;
}

BinauralRecording pad_for_jitter(const BinauralClip& clip) {
  BinauralRecording recording;
  recording.sample_rate = clip.sample_rate;
  const std::size_t total = kClipSamples + 2 * kMaxJitterSamples;
  recording.left.assign(total, 0.0f);
  recording.right.assign(total, 0.0f);
  std::copy(clip.left.begin(), clip.left.end(),
            recording.left.begin() + kMaxJitterSamples);
  std::copy(clip.right.begin(), clip.right.end(),
            recording.right.begin() + kMaxJitterSamples);
  return recording;
}

std::vector<float> stft_magnitude(std::span<const float> samples,
                                  const SpectrogramOptions& options) {
  const int n = static_cast<int>(samples.size());
  require(n > kFftSize / 2, ErrorCode::kInvalidArgument,
          "signal too short for centered reflection padding");
  static const std::vector<float> window = periodic_hann(kWindowLength);
  const int frames = (n + kHopLength - 1) / kHopLength;
  const int window_offset = (kFftSize - kWindowLength) / 2;

  std::vector<float> frame(kFftSize, 0.0f);
  std::vector<std::complex<float>> spectrum(kFrequencyBins);
  std::vector<float> out(static_cast<std::size_t>(kFrequencyBins) * frames);
  for (int t = 0; t < frames; ++t) {
    // Frame t is centered on sample t * hop; only the Hann taps are nonzero.
    const int first = t * kHopLength - kFftSize / 2 + window_offset;
    for (int j = 0; j < kWindowLength; ++j) {
      frame[window_offset + j] = samples[reflect_index(first + j, n)] * window[j];
    }
    fftwf_execute_dft_r2c(r2c_plan(), frame.data(),
                          reinterpret_cast<fftwf_complex*>(spectrum.data()));
    for (int k = 0; k < kFrequencyBins; ++k) {
      const float magnitude = std::abs(spectrum[k]);
      out[static_cast<std::size_t>(k) * frames + t] =
          options.log_magnitude ? std::log1p(magnitude) : magnitude;
    }
  }
  return out;
}

Spectrogram compute_spectrogram(const BinauralClip& clip,
                                const SpectrogramOptions& options) {
  validate(clip);
  Spectrogram spec;
  const std::size_t per_channel =
      static_cast<std::size_t>(spec.bins) * spec.frames;
  spec.magnitudes.resize(2 * per_channel);
  const auto left = stft_magnitude(clip.left, options);
  const auto right = stft_magnitude(clip.right, options);
  std::copy(left.begin(), left.end(), spec.magnitudes.begin());
  std::copy(right.begin(), right.end(), spec.magnitudes.begin() + per_channel);
  return spec;
}

DepthMap normalize_depth(std::span<const double> raw,
                         std::span<const std::uint8_t> valid) {
  require(raw.size() == valid.size(), ErrorCode::kInvalidArgument,
          "depth and validity mask differ in size");
  const auto resolution =
      static_cast<int>(std::lround(std::sqrt(static_cast<double>(raw.size()))));
  require(resolution > 0 &&
              static_cast<std::size_t>(resolution) * resolution == raw.size(),
          ErrorCode::kInvalidArgument, "depth map must be square");
  DepthMap depth;
  depth.resolution = resolution;
  depth.pixels.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!valid[i]) {
      depth.pixels[i] = 0.0f;
      continue;
    }
    require(std::isfinite(raw[i]) && raw[i] >= 0.0, ErrorCode::kInvalidArgument,
            "negative or non-finite depth at a valid pixel");
    depth.pixels[i] =
        static_cast<float>(std::min(raw[i], kMaxDepthMeters) / kMaxDepthMeters);
  }
  return depth;
}

}  // namespace echo2depth::signal
