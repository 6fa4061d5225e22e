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

#include "echo2depth/acoustic_sim.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "echo2depth/error.h"

namespace echo2depth::sim {
namespace {

constexpr double kWallAlbedo = 0.75;
constexpr double kFloorAlbedo = 0.45;
constexpr double kCeilingAlbedo = 0.9;

EchoPath make_path(const Vec3& image, const Vec3& receiver, Ear ear,
                   int reflections, double reflection_gain) {
  EchoPath path;
  const Vec3 offset = image - receiver;
  path.path_length = offset.norm();
  path.reflection_count = reflections;
  path.arrival_direction = offset / path.path_length;
  path.amplitude = reflection_gain / path.path_length;
  path.receiver = ear;
  path.image_source = image;
  return path;
}

// Images of `source` along one axis: 2 n L + (-1)^p s, reached after
// |2n - p| reflections.
struct AxisImage {
  double coordinate;
  int reflections;
};

std::vector<AxisImage> axis_images(double source, double length,
                                   int max_order) {
  std::vector<AxisImage> images;
  const int reach = (max_order + 1) / 2 + 1;
  for (int n = -reach; n <= reach; ++n) {
    for (int p = 0; p <= 1; ++p) {
      const int reflections = std::abs(2 * n - p);
      if (reflections > max_order) continue;
      images.push_back({2.0 * n * length + (p ? -source : source), reflections});
    }
  }
  return images;
}

void append_obstacle_reflections(const RoomScene& scene, const Vec3& receiver,
                                 Ear ear, std::vector<EchoPath>& out) {
  const Vec3& emitter = scene.emitter;
  for (const auto& box : scene.obstacles) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int side : {-1, 1}) {
        const double plane = box.center[axis] + side * box.half_extent[axis];
        // Both endpoints must face the outward side of this face.
        if (side * (emitter[axis] - plane) <= 0.0 ||
            side * (receiver[axis] - plane) <= 0.0) {
          continue;
        }
        Vec3 image = emitter;
        image[axis] = 2.0 * plane - emitter[axis];
        const double t = (plane - receiver[axis]) / (image[axis] - receiver[axis]);
        const Vec3 hit = receiver + t * (image - receiver);
        bool on_face = true;
        for (int other = 0; other < 3; ++other) {
          if (other == axis) continue;
          on_face = on_face && std::abs(hit[other] - box.center[other]) <=
                                   box.half_extent[other];
        }
        if (on_face) {
          out.push_back(make_path(image, receiver, ear, 1, 1.0 - box.absorption));
        }
      }
    }
  }
}

// One-pole low-pass run forward then backward (zero phase), truncated to the
// input support.
std::vector<double> zero_phase_lowpass(std::span<const float> input,
                                       double cutoff_hz, double sample_rate) {
  const double alpha =
      1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz / sample_rate);
  std::vector<double> out(input.begin(), input.end());
  double state = 0.0;
  for (double& v : out) {
    state += alpha * (v - state);
    v = state;
  }
  state = 0.0;
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    state += alpha * (*it - state);
    *it = state;
  }
  return out;
}

}  // namespace

std::vector<EchoPath> trace_image_sources(const RoomScene& scene,
                                          int max_order) {
  require(max_order >= 0, ErrorCode::kInvalidArgument,
          "max_order must be non-negative");
  require(max_order <= kMaxReflectionOrder, ErrorCode::kInvalidArgument,
          "max_order above " + std::to_string(kMaxReflectionOrder) +
              " is not supported");
  validate(scene);

  const double wall_gain = 1.0 - scene.wall_absorption;
  std::array<std::vector<AxisImage>, 3> images;
  for (int axis = 0; axis < 3; ++axis) {
    images[axis] =
        axis_images(scene.emitter[axis], scene.room_size[axis], max_order);
  }

  std::vector<EchoPath> paths;
  for (Ear ear : {Ear::kLeft, Ear::kRight}) {
    const Vec3 receiver = scene.receiver_position(ear);
    for (const auto& ix : images[0]) {
      for (const auto& iy : images[1]) {
        for (const auto& iz : images[2]) {
          const int order = ix.reflections + iy.reflections + iz.reflections;
          if (order > max_order) continue;
          paths.push_back(make_path(Vec3(ix.coordinate, iy.coordinate,
                                         iz.coordinate),
                                    receiver, ear, order,
                                    std::pow(wall_gain, order)));
        }
      }
    }
    if (max_order >= 1) append_obstacle_reflections(scene, receiver, ear, paths);
  }
  return paths;
}

std::vector<EchoPath> paths_within_window(std::span<const EchoPath> paths,
                                          double sample_rate,
                                          int window_samples) {
  std::vector<EchoPath> kept;
  for (const auto& path : paths) {
    if (path.path_length / kSpeedOfSound * sample_rate < window_samples) {
      kept.push_back(path);
    }
  }
  return kept;
}

HeadOrientation head_orientation(const RoomScene& scene) {
  return {scene.camera.forward, scene.camera.right()};
}

PinnaResponse pinna_response(const Vec3& arrival_direction, Ear ear,
                             const HeadOrientation& head) {
  const Vec3 ear_axis = ear == Ear::kRight ? head.right : -head.right;
  const double lateral = arrival_direction.dot(ear_axis);
  const double frontal = std::clamp(arrival_direction.dot(head.forward), -1.0, 1.0);
  PinnaResponse response;
  response.gain = 0.5 + 0.5 * std::max(0.0, lateral);
  response.cutoff_hz = 4000.0 + (20000.0 - 4000.0) * 0.5 * (1.0 + frontal);
  return response;
}

signal::BinauralClip render_binaural_echo(std::span<const EchoPath> paths,
                                          const signal::Waveform& chirp,
                                          double sample_rate,
                                          const RenderOptions& options) {
  require(!paths.empty(), ErrorCode::kInvalidArgument, "no echo paths");
  require(sample_rate > 0 && chirp.sample_rate == sample_rate,
          ErrorCode::kInvalidArgument,
          "chirp sample rate differs from the render rate");
  require(chirp.size() > 0, ErrorCode::kInvalidArgument, "empty chirp");
  const int window = options.window_samples;

  std::vector<double> left(window, 0.0), right(window, 0.0);
  for (const auto& path : paths) {
    const double delay = path.path_length / kSpeedOfSound * sample_rate;
    require(delay < window, ErrorCode::kOutOfRange,
            "path of " + std::to_string(path.path_length) +
                " m arrives after the render window");
    const auto pinna =
        pinna_response(path.arrival_direction, path.receiver, options.head);
    auto kernel = zero_phase_lowpass(chirp.samples, pinna.cutoff_hz, sample_rate);
    const double scale = path.amplitude * pinna.gain * options.output_gain;

    auto& channel = path.receiver == Ear::kLeft ? left : right;
    const auto whole = static_cast<int>(std::floor(delay));
    const double frac = delay - whole;
    for (int n = 0; n < static_cast<int>(kernel.size()); ++n) {
      const double v = kernel[n] * scale;
      const int at = whole + n;
      if (at < window) channel[at] += (1.0 - frac) * v;
      if (at + 1 < window) channel[at + 1] += frac * v;
    }
  }

  if (std::isfinite(options.snr_db)) {
    double power = 0.0;
    for (int i = 0; i < window; ++i) power += left[i] * left[i] + right[i] * right[i];
    power /= 2.0 * window;
    if (power > 0.0) {
      const double sigma = std::sqrt(power / std::pow(10.0, options.snr_db / 10.0));
      std::mt19937_64 rng(options.noise_seed);
      std::normal_distribution<double> noise(0.0, sigma);
      for (int i = 0; i < window; ++i) {
        left[i] += noise(rng);
        right[i] += noise(rng);
      }
    }
  }

  signal::BinauralClip clip;
  clip.sample_rate = sample_rate;
  clip.onset_index = 0;
  clip.left.resize(window);
  clip.right.resize(window);
  for (int i = 0; i < window; ++i) {
    clip.left[i] = static_cast<float>(std::clamp(left[i], -1.0, 1.0));
    clip.right[i] = static_cast<float>(std::clamp(right[i], -1.0, 1.0));
  }
  return clip;
}

RayHit cast_ray(const RoomScene& scene, const Vec3& origin,
                const Vec3& direction) {
  RayHit best;
  for (int axis = 0; axis < 3; ++axis) {
    if (direction[axis] == 0.0) continue;
    const bool positive = direction[axis] > 0.0;
    const double wall = positive ? scene.room_size[axis] : 0.0;
    const double t = (wall - origin[axis]) / direction[axis];
    if (t > 0.0 && t < best.distance) {
      best.distance = t;
      best.normal = Vec3::Zero();
      best.normal[axis] = positive ? -1.0 : 1.0;
      best.albedo = axis == 2 ? (positive ? kCeilingAlbedo : kFloorAlbedo)
                              : kWallAlbedo;
      best.hit = true;
    }
  }
  for (const auto& box : scene.obstacles) {
    double enter = -std::numeric_limits<double>::infinity();
    double leave = std::numeric_limits<double>::infinity();
    int enter_axis = -1;
    bool missed = false;
    for (int axis = 0; axis < 3 && !missed; ++axis) {
      const double lo = box.center[axis] - box.half_extent[axis];
      const double hi = box.center[axis] + box.half_extent[axis];
      if (direction[axis] == 0.0) {
        missed = origin[axis] < lo || origin[axis] > hi;
        continue;
      }
      double t0 = (lo - origin[axis]) / direction[axis];
      double t1 = (hi - origin[axis]) / direction[axis];
      if (t0 > t1) std::swap(t0, t1);
      if (t0 > enter) {
        enter = t0;
        enter_axis = axis;
      }
      leave = std::min(leave, t1);
    }
    if (missed || enter_axis < 0 || enter > leave || enter <= 0.0 ||
        enter >= best.distance) {
      continue;
    }
    best.distance = enter;
    best.normal = Vec3::Zero();
    best.normal[enter_axis] = direction[enter_axis] > 0.0 ? -1.0 : 1.0;
    best.albedo = 0.95 - 0.8 * box.absorption;
    best.hit = true;
  }
  return best;
}

Vec3 pixel_ray(const CameraPose& camera, int resolution, int row, int col) {
  // tan(45 deg) = 1, so image-plane coordinates span [-1, 1].
  const double u = 2.0 * (col + 0.5) / resolution - 1.0;
  const double v = 1.0 - 2.0 * (row + 0.5) / resolution;
  return (camera.forward + u * camera.right() + v * camera.up).normalized();
}

bool is_supported_resolution(int resolution) {
  return resolution == 16 || resolution == 32 || resolution == 64 ||
         resolution == 128;
}

namespace {

void check_render_inputs(const RoomScene& scene, int resolution) {
  require(is_supported_resolution(resolution), ErrorCode::kInvalidArgument,
          "resolution must be one of 16, 32, 64, 128");
  validate(scene);
  for (const auto& box : scene.obstacles) {
    require(!box.contains(scene.camera.position), ErrorCode::kInvalidArgument,
            "camera inside an obstacle");
  }
}

}  // namespace

signal::DepthMap render_depth_map(const RoomScene& scene, int resolution) {
  check_render_inputs(scene, resolution);
  const std::size_t count = static_cast<std::size_t>(resolution) * resolution;
  std::vector<double> raw(count, 0.0);
  std::vector<std::uint8_t> valid(count, 0);
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const Vec3 ray = pixel_ray(scene.camera, resolution, row, col);
      const auto hit = cast_ray(scene, scene.camera.position, ray);
      const std::size_t i = static_cast<std::size_t>(row) * resolution + col;
      if (!hit.hit) continue;
      raw[i] = hit.distance * ray.dot(scene.camera.forward);
      valid[i] = 1;
    }
  }
  return signal::normalize_depth(raw, valid);
}

signal::GrayImage render_grayscale(const RoomScene& scene, int resolution) {
  check_render_inputs(scene, resolution);
  signal::GrayImage image;
  image.resolution = resolution;
  image.pixels.assign(static_cast<std::size_t>(resolution) * resolution, 0.0f);
  const Vec3& forward = scene.camera.forward;
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const Vec3 ray = pixel_ray(scene.camera, resolution, row, col);
      const auto hit = cast_ray(scene, scene.camera.position, ray);
      if (!hit.hit) continue;
      const double depth = hit.distance * ray.dot(forward);
      const double lambert = std::max(0.0, -hit.normal.dot(forward));
      const double fog = 1.0 - 0.5 * std::min(depth, signal::kMaxDepthMeters) /
                                   signal::kMaxDepthMeters;
      image.at(row, col) =
          static_cast<float>(hit.albedo * (0.25 + 0.75 * lambert) * fog);
    }
  }
  return image;
}

}  // namespace echo2depth::sim
