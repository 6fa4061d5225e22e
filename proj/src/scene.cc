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

#include "echo2depth/scene.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "echo2depth/error.h"
#include "echo2depth/keyvalue.h"

namespace echo2depth::sim {
namespace {

bool strictly_inside_room(const RoomScene& scene, const Vec3& p) {
  return (p.array() > 0.0).all() && (p.array() < scene.room_size.array()).all();
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

std::string format_vec(const Vec3& v) {
  return format_double(v.x()) + " " + format_double(v.y()) + " " +
         format_double(v.z());
}

Vec3 parse_vec(const KeyValueFile& kv, std::string_view key) {
  const auto values = parse_numbers(kv.get(key));
  require(values.size() == 3, ErrorCode::kInvalidArgument,
          "'" + std::string(key) + "' needs three numbers");
  return Vec3(values[0], values[1], values[2]);
}

}  // namespace

bool Box::contains(const Vec3& p) const {
  return ((p - center).cwiseAbs().array() <= half_extent.array()).all();
}

Vec3 RoomScene::receiver_position(Ear ear) const {
  const Vec3 right = camera.right();
  const double side = ear == Ear::kRight ? 0.5 : -0.5;
  return emitter + side * receiver_baseline * right;
}

void validate(const RoomScene& scene) {
  require((scene.room_size.array() > 0.0).all() && scene.room_size.allFinite(),
          ErrorCode::kInvalidArgument, "room size must be positive");
  require(in_unit_interval(scene.wall_absorption), ErrorCode::kInvalidArgument,
          "wall absorption must lie in [0, 1]");
  require(std::isfinite(scene.receiver_baseline) &&
              scene.receiver_baseline >= 0.0,
          ErrorCode::kInvalidArgument, "receiver baseline must be >= 0");
  const auto& cam = scene.camera;
  require(std::abs(cam.forward.norm() - 1.0) < 1e-6 &&
              std::abs(cam.up.norm() - 1.0) < 1e-6 &&
              std::abs(cam.forward.dot(cam.up)) < 1e-6,
          ErrorCode::kInvalidArgument,
          "camera forward/up must be orthonormal unit vectors");
  require(strictly_inside_room(scene, cam.position),
          ErrorCode::kInvalidArgument, "camera outside the room");

  for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
    const auto& box = scene.obstacles[i];
    const std::string label = "obstacle " + std::to_string(i);
    require((box.half_extent.array() > 0.0).all(), ErrorCode::kInvalidArgument,
            label + " has a non-positive half extent");
    require(in_unit_interval(box.absorption), ErrorCode::kInvalidArgument,
            label + " absorption must lie in [0, 1]");
    require((box.min_corner().array() >= 0.0).all() &&
                (box.max_corner().array() <= scene.room_size.array()).all(),
            ErrorCode::kInvalidArgument, label + " extends outside the room");
  }

  const Vec3 points[] = {scene.emitter, scene.receiver_position(Ear::kLeft),
                         scene.receiver_position(Ear::kRight)};
  const char* names[] = {"emitter", "left receiver", "right receiver"};
  for (int i = 0; i < 3; ++i) {
    require(strictly_inside_room(scene, points[i]), ErrorCode::kInvalidArgument,
            std::string(names[i]) + " outside the room");
    for (const auto& box : scene.obstacles) {
      require(!box.contains(points[i]), ErrorCode::kInvalidArgument,
              std::string(names[i]) + " inside an obstacle");
    }
  }
}

std::string serialize_scene(const RoomScene& scene) {
  KeyValueFile kv;
  kv.add("room_size", format_vec(scene.room_size));
  kv.add("wall_absorption", format_double(scene.wall_absorption));
  kv.add("emitter", format_vec(scene.emitter));
  kv.add("receiver_baseline", format_double(scene.receiver_baseline));
  kv.add("camera_position", format_vec(scene.camera.position));
  kv.add("camera_forward", format_vec(scene.camera.forward));
  kv.add("camera_up", format_vec(scene.camera.up));
  kv.add("rng_seed", std::to_string(scene.rng_seed));
  for (const auto& box : scene.obstacles) {
    kv.add("obstacle", format_vec(box.center) + " " +
                           format_vec(box.half_extent) + " " +
                           format_double(box.absorption));
  }
  return "# echo2depth scene\n" + kv.serialize();
}

RoomScene parse_scene(std::string_view text) {
  const auto kv = KeyValueFile::parse(text);
  RoomScene scene;
  scene.room_size = parse_vec(kv, "room_size");
  scene.wall_absorption = kv.get_double("wall_absorption");
  scene.emitter = parse_vec(kv, "emitter");
  scene.receiver_baseline =
      kv.get_double_or("receiver_baseline", kDefaultReceiverBaseline);
  scene.camera.position =
      kv.has("camera_position") ? parse_vec(kv, "camera_position")
                                : scene.emitter;
  scene.camera.forward = parse_vec(kv, "camera_forward");
  scene.camera.up = parse_vec(kv, "camera_up");
  scene.rng_seed = kv.has("rng_seed") ? kv.get_uint("rng_seed") : 0;
  for (const auto& line : kv.get_all("obstacle")) {
    const auto values = parse_numbers(line);
    require(values.size() == 7, ErrorCode::kInvalidArgument,
            "obstacle needs: cx cy cz hx hy hz absorption");
    scene.obstacles.push_back({Vec3(values[0], values[1], values[2]),
                               Vec3(values[3], values[4], values[5]),
                               values[6]});
  }
  validate(scene);
  return scene;
}

RoomScene load_scene(const std::filesystem::path& path) {
  const auto kv = KeyValueFile::load(path);
  return parse_scene(kv.serialize());
}

void save_scene(const RoomScene& scene, const std::filesystem::path& path) {
  KeyValueFile::parse(serialize_scene(scene)).save(path);
}

std::string scene_hash(const RoomScene& scene) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : serialize_scene(scene)) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

RoomScene random_scene(std::uint64_t seed,
                       const SceneRandomizerConfig& config) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  RoomScene scene;
  scene.rng_seed = seed;
  for (int axis = 0; axis < 3; ++axis) {
    scene.room_size[axis] =
        uniform(config.min_room_extent, config.max_room_extent);
  }
  scene.wall_absorption = uniform(config.min_absorption, config.max_absorption);

  const Vec3& size = scene.room_size;
  const Vec3 head(uniform(0.5, size.x() - 0.5), uniform(0.5, size.y() - 0.5),
                  uniform(0.5, std::min(1.6, size.z() - 0.5)));
  const double yaw = uniform(0.0, 2.0 * std::numbers::pi);
  scene.emitter = head;
  scene.camera.position = head;
  scene.camera.forward = Vec3(std::cos(yaw), std::sin(yaw), 0.0);
  scene.camera.up = Vec3::UnitZ();

  const Vec3 keep_clear[] = {head, scene.receiver_position(Ear::kLeft),
                             scene.receiver_position(Ear::kRight)};
  const int count =
      std::uniform_int_distribution<int>(0, config.max_obstacles)(rng);
  constexpr double kClearance = 0.3;
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      Box box;
      box.half_extent = Vec3(uniform(0.2, 1.0), uniform(0.2, 1.0),
                             uniform(0.3, std::min(1.2, size.z() / 2)));
      box.center =
          Vec3(uniform(box.half_extent.x(), size.x() - box.half_extent.x()),
               uniform(box.half_extent.y(), size.y() - box.half_extent.y()),
               box.half_extent.z());
      box.absorption = uniform(config.min_absorption, config.max_absorption);
      Box padded = box;
      padded.half_extent.array() += kClearance;
      bool blocked = false;
      for (const auto& p : keep_clear) blocked = blocked || padded.contains(p);
      if (!blocked) {
        scene.obstacles.push_back(box);
        break;
      }
    }
  }
  validate(scene);
  return scene;
}

}  // namespace echo2depth::sim
