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

#ifndef ECHO2DEPTH_SIGNAL_PIPELINE_H_
#define ECHO2DEPTH_SIGNAL_PIPELINE_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace echo2depth::signal {

inline constexpr double kSampleRate = 44100.0;
inline constexpr int kClipSamples = 3200;
inline constexpr double kChirpStartHz = 20.0;
inline constexpr double kChirpEndHz = 20000.0;
inline constexpr double kChirpDurationS = 0.003;
inline constexpr int kMaxJitterSamples = 960;  // 30% of the clip
inline constexpr int kFftSize = 512;
inline constexpr int kWindowLength = 64;
inline constexpr int kHopLength = 16;
inline constexpr int kFrequencyBins = kFftSize / 2 + 1;
inline constexpr int kSpectrogramFrames =
    (kClipSamples + kHopLength - 1) / kHopLength;
inline constexpr double kMaxDepthMeters = 12.0;
inline constexpr double kMinOnsetCorrelation = 0.6;

// Mono signal in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  double sample_rate = kSampleRate;

  int size() const { return static_cast<int>(samples.size()); }
};

// Two time-aligned channels of arbitrary length.
struct BinauralRecording {
  std::vector<float> left;
  std::vector<float> right;
  double sample_rate = kSampleRate;

  int size() const { return static_cast<int>(left.size()); }
};

// Fixed-length window (kClipSamples per ear) holding one chirp and its echoes.
struct BinauralClip {
  std::vector<float> left;
  std::vector<float> right;
  int onset_index = 0;
  double sample_rate = kSampleRate;
};

// [channel][frequency_bin][frame], row-major.
struct Spectrogram {
  int channels = 2;
  int bins = kFrequencyBins;
  int frames = kSpectrogramFrames;
  std::vector<float> magnitudes;

  float at(int channel, int bin, int frame) const {
    return magnitudes[(static_cast<std::size_t>(channel) * bins + bin) * frames +
                      frame];
  }
};

// Square single-channel image, row-major, values in [0, 1].
struct SquareImage {
  int resolution = 0;
  std::vector<float> pixels;

  float at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * resolution + col];
  }
  float& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * resolution + col];
  }
};

// Depth normalized by kMaxDepthMeters; 0 marks invalid pixels.
struct DepthMap : SquareImage {};
struct GrayImage : SquareImage {};

void validate(const Waveform& waveform);
void validate(const BinauralClip& clip);
void validate(const SquareImage& image);

// Phase in cycles of the linear sweep at time t.
double linear_chirp_phase(double t, double f_start, double f_end,
                          double duration);

Waveform synthesize_chirp(double f_start = kChirpStartHz,
                          double f_end = kChirpEndHz,
                          double duration = kChirpDurationS,
                          double sample_rate = kSampleRate);

// Normalized cross-correlation of the channel-mean recording against the
// chirp template at every lag.
std::vector<double> normalized_cross_correlation(
    const BinauralRecording& recording, const Waveform& chirp);

// Lag of the correlation peak; throws Error(kNoChirp) if the peak falls
// below `min_correlation`.
int locate_chirp_onset(const BinauralRecording& recording,
                       const Waveform& chirp,
                       double min_correlation = kMinOnsetCorrelation);

BinauralClip extract_window(const BinauralRecording& recording, int onset);

struct JitteredClip {
  BinauralClip clip;
  int drawn_shift = 0;    // uniform in [-kMaxJitterSamples, kMaxJitterSamples]
  int applied_shift = 0;  // after clamping to keep the chirp in-window
};

// Shifts the window start by a uniform draw in [-960, 960] samples, clamped
// so that [onset, onset + chirp_length) stays inside the returned window and
// the window stays inside the recording.
JitteredClip jitter_window(const BinauralRecording& recording, int onset,
                           std::mt19937_64& rng,
                           int chirp_length = 132);

// Embeds a clip in silence with kMaxJitterSamples of padding on either side
// so it can be jittered; the chirp onset lands at kMaxJitterSamples.
BinauralRecording pad_for_jitter(const BinauralClip& clip);

struct SpectrogramOptions {
  bool log_magnitude = false;  // log(1 + |X|) when set
};

Spectrogram compute_spectrogram(const BinauralClip& clip,
                                const SpectrogramOptions& options = {});

// Single channel of compute_spectrogram, [bin][frame].
std::vector<float> stft_magnitude(std::span<const float> samples,
                                  const SpectrogramOptions& options = {});

// `raw` in meters, row-major square; `valid` non-zero where measured.
DepthMap normalize_depth(std::span<const double> raw,
                         std::span<const std::uint8_t> valid);

}  // namespace echo2depth::signal

#endif  // ECHO2DEPTH_SIGNAL_PIPELINE_H_
