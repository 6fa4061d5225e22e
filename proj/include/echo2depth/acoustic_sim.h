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

#ifndef ECHO2DEPTH_ACOUSTIC_SIM_H_
#define ECHO2DEPTH_ACOUSTIC_SIM_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "echo2depth/scene.h"
#include "echo2depth/signal_pipeline.h"

namespace echo2depth::sim {

inline constexpr double kSpeedOfSound = 343.0;  // m/s
inline constexpr int kMaxReflectionOrder = 6;

struct EchoPath {
  double path_length = 0.0;
  int reflection_count = 0;
  // Unit vector from the receiver towards the (image) source.
  Vec3 arrival_direction = Vec3::UnitX();
  double amplitude = 0.0;
  Ear receiver = Ear::kLeft;
  Vec3 image_source = Vec3::Zero();
};

// Image-source paths with at most `max_order` wall reflections (including the
// direct path), plus first-order specular reflections off obstacle faces
// visible from both emitter and receiver.
std::vector<EchoPath> trace_image_sources(const RoomScene& scene,
                                          int max_order);

// Drops paths arriving at or after `window_samples` at `sample_rate`.
std::vector<EchoPath> paths_within_window(
    std::span<const EchoPath> paths, double sample_rate = signal::kSampleRate,
    int window_samples = signal::kClipSamples);

struct HeadOrientation {
  Vec3 forward = Vec3::UnitX();
  Vec3 right = -Vec3::UnitY();
};

HeadOrientation head_orientation(const RoomScene& scene);

struct PinnaResponse {
  double gain = 1.0;
  double cutoff_hz = 20000.0;
};

// 0.5 + 0.5 max(0, cos) against the ear's outward axis; low-pass cutoff
// falls linearly in cosine from 20 kHz (frontal) to 4 kHz (rear).
PinnaResponse pinna_response(const Vec3& arrival_direction, Ear ear,
                             const HeadOrientation& head);

struct RenderOptions {
  double snr_db = 30.0;  // infinity disables noise
  double output_gain = 0.2;
  HeadOrientation head;
  std::uint64_t noise_seed = 0;
  int window_samples = signal::kClipSamples;
};

// Sums delayed, pinna-filtered chirp copies per ear and adds white Gaussian
// noise at `snr_db` relative to the clean window power. Sample 0 is chirp
// emission. Output is clamped to [-1, 1].
signal::BinauralClip render_binaural_echo(std::span<const EchoPath> paths,
                                          const signal::Waveform& chirp,
                                          double sample_rate,
                                          const RenderOptions& options = {});

// Ray hit against the room or an obstacle.
struct RayHit {
  double distance = std::numeric_limits<double>::infinity();
  Vec3 normal = Vec3::Zero();
  double albedo = 0.0;
  bool hit = false;
};

RayHit cast_ray(const RoomScene& scene, const Vec3& origin,
                const Vec3& direction);

// Unit ray through the center of pixel (row, col) for a 90 degree pinhole.
Vec3 pixel_ray(const CameraPose& camera, int resolution, int row, int col);

// Planar (optical-axis) depth, clipped at 12 m and scaled to [0, 1].
signal::DepthMap render_depth_map(const RoomScene& scene, int resolution);

// Lambert shading under a headlight along the camera axis.
signal::GrayImage render_grayscale(const RoomScene& scene, int resolution);

bool is_supported_resolution(int resolution);

}  // namespace echo2depth::sim

#endif  // ECHO2DEPTH_ACOUSTIC_SIM_H_
