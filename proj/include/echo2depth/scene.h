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

#ifndef ECHO2DEPTH_SCENE_H_
#define ECHO2DEPTH_SCENE_H_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace echo2depth::sim {

using Vec3 = Eigen::Vector3d;

inline constexpr double kDefaultReceiverBaseline = 0.235;  // meters

// Axis-aligned box obstacle.
struct Box {
  Vec3 center = Vec3::Zero();
  Vec3 half_extent = Vec3::Zero();
  double absorption = 0.0;

  Vec3 min_corner() const { return center - half_extent; }
  Vec3 max_corner() const { return center + half_extent; }
  bool contains(const Vec3& p) const;
};

struct CameraPose {
  Vec3 position = Vec3::Zero();
  Vec3 forward = Vec3::UnitX();
  Vec3 up = Vec3::UnitZ();

  Vec3 right() const { return forward.cross(up); }
};

enum class Ear { kLeft, kRight };

// Rectangular room spanning [0, room_size] on each axis, z up.
struct RoomScene {
  Vec3 room_size = Vec3(4.0, 4.0, 3.0);
  std::vector<Box> obstacles;
  double wall_absorption = 0.3;
  Vec3 emitter = Vec3(2.0, 2.0, 1.0);
  double receiver_baseline = kDefaultReceiverBaseline;
  // Its forward/up also orient the ears: the ears sit at
  // emitter -/+ baseline/2 along camera.right().
  CameraPose camera;
  std::uint64_t rng_seed = 0;

  Vec3 receiver_position(Ear ear) const;
};

// Throws Error(kInvalidArgument) describing the first violated invariant.
void validate(const RoomScene& scene);

std::string serialize_scene(const RoomScene& scene);
RoomScene parse_scene(std::string_view text);
RoomScene load_scene(const std::filesystem::path& path);
void save_scene(const RoomScene& scene, const std::filesystem::path& path);

// 64-bit FNV-1a over the canonical serialization, as 16 hex digits.
std::string scene_hash(const RoomScene& scene);

struct SceneRandomizerConfig {
  double min_room_extent = 3.0;
  double max_room_extent = 10.0;
  int max_obstacles = 6;
  double min_absorption = 0.1;
  double max_absorption = 0.6;
};

// Deterministic function of `seed`: room size, obstacles, absorption and a
// head/camera pose facing a random horizontal direction.
RoomScene random_scene(std::uint64_t seed,
                       const SceneRandomizerConfig& config = {});

}  // namespace echo2depth::sim

#endif  // ECHO2DEPTH_SCENE_H_
