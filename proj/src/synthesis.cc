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

#include "echo2depth/synthesis.h"

#include <algorithm>
#include <random>

namespace echo2depth::sim {
namespace {

constexpr int kMinLeadIn = 200;
constexpr int kMaxLeadIn = 800;
constexpr int kTail = signal::kClipSamples;
constexpr std::uint64_t kNoiseSalt = 0x9e3779b97f4a7c15ull;

}  // namespace

SynthesizedSample synthesize_sample(const RoomScene& scene,
                                    const SynthesisOptions& options) {
  static const signal::Waveform chirp = signal::synthesize_chirp();

  const auto paths = paths_within_window(
      trace_image_sources(scene, options.max_order));
  RenderOptions render;
  render.snr_db = options.snr_db;
  render.head = head_orientation(scene);
  render.noise_seed = scene.rng_seed ^ kNoiseSalt;
  const auto window =
      render_binaural_echo(paths, chirp, signal::kSampleRate, render);

  std::mt19937_64 rng(scene.rng_seed);
  const int lead_in = std::uniform_int_distribution<int>(kMinLeadIn, kMaxLeadIn)(rng);
  signal::BinauralRecording recording;
  const std::size_t total = lead_in + signal::kClipSamples + kTail;
  recording.left.assign(total, 0.0f);
  recording.right.assign(total, 0.0f);
  std::copy(window.left.begin(), window.left.end(),
            recording.left.begin() + lead_in);
  std::copy(window.right.begin(), window.right.end(),
            recording.right.begin() + lead_in);

  const int onset = signal::locate_chirp_onset(recording, chirp);
  SynthesizedSample sample;
  sample.clip = signal::extract_window(recording, onset);
  sample.depth = render_depth_map(scene, options.resolution);
  sample.gray = render_grayscale(scene, options.resolution);
  return sample;
}

}  // namespace echo2depth::sim
