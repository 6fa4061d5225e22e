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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "echo2depth/acoustic_sim.h"
#include "echo2depth/error.h"
#include "echo2depth/scene.h"
#include "../support/oracles.h"

namespace echo2depth::sim {
namespace {

RoomScene empty_room() {
  RoomScene s;
  s.room_size = Vec3(4.0, 4.0, 3.0);
  s.emitter = Vec3(2.0, 2.0, 1.0);
  s.camera.position = s.emitter;
  return s;
}

RoomScene random_shoebox(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> size(3.0, 10.0), frac(0.15, 0.85),
      yaw(0.0, 6.283);
  RoomScene s;
  s.room_size = Vec3(size(rng), size(rng), size(rng));
  s.emitter = Vec3(frac(rng) * s.room_size.x(), frac(rng) * s.room_size.y(),
                   frac(rng) * s.room_size.z());
  const double a = yaw(rng);
  s.camera.position = s.emitter;
  s.camera.forward = Vec3(std::cos(a), std::sin(a), 0.0);
  s.wall_absorption = 0.3;
  return s;
}

TEST(ImageSources, DirectPathOnlyAtOrderZero) {
  const RoomScene s = empty_room();
  const auto paths = trace_image_sources(s, 0);
  ASSERT_EQ(paths.size(), 2u);
  for (const auto& p : paths) {
    EXPECT_NEAR(p.path_length, s.receiver_baseline / 2, 1e-12);
    EXPECT_EQ(p.reflection_count, 0);
  }
  EXPECT_NE(paths[0].receiver, paths[1].receiver);
}

TEST(ImageSources, SingleWallEchoForCoLocatedReceiver) {
  RoomScene s = empty_room();
  s.room_size = Vec3(20.0, 20.0, 20.0);
  s.emitter = Vec3(2.0, 10.0, 10.0);
  s.camera.position = s.emitter;
  s.receiver_baseline = 0.0;
  s.wall_absorption = 0.0;
  const auto paths = trace_image_sources(s, 1);
  int found = 0;
  for (const auto& p : paths) {
    if (p.reflection_count == 1 && std::abs(p.path_length - 4.0) < 1e-12) {
      EXPECT_NEAR(p.amplitude, 1.0 / 4.0, 1e-12);
      ++found;
    }
  }
  EXPECT_EQ(found, 2);  // one per ear
}

TEST(ImageSources, MatchBruteForceMirrorEnumeration) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const RoomScene s = random_shoebox(rng);
    for (int order = 0; order <= 3; ++order) {
      const auto images = oracle::mirror_images(s, order);
      for (Ear ear : {Ear::kLeft, Ear::kRight}) {
        std::vector<double> expected, actual;
        std::vector<int> expected_orders, actual_orders;
        for (const auto& im : images) {
          expected.push_back((im.position - s.receiver_position(ear)).norm());
        }
        for (const auto& p : trace_image_sources(s, order)) {
          if (p.receiver == ear) actual.push_back(p.path_length);
        }
        std::sort(expected.begin(), expected.end());
        std::sort(actual.begin(), actual.end());
        ASSERT_EQ(actual.size(), expected.size()) << "order " << order;
        for (std::size_t i = 0; i < actual.size(); ++i)
          EXPECT_NEAR(actual[i], expected[i], 1e-9);
      }
    }
  }
}

TEST(ImageSources, AmplitudeFollowsAbsorptionAndDistance) {
  std::mt19937_64 rng(3);
  const RoomScene s = random_shoebox(rng);
  for (const auto& p : trace_image_sources(s, 2)) {
    const double gain = std::pow(1.0 - s.wall_absorption, p.reflection_count);
    EXPECT_NEAR(p.amplitude, gain / p.path_length, 1e-12);
    EXPECT_NEAR(p.arrival_direction.norm(), 1.0, 1e-12);
  }
}

TEST(ImageSources, ObstacleFaceGivesFirstOrderEcho) {
  RoomScene s = empty_room();
  s.room_size = Vec3(10.0, 10.0, 3.0);
  s.emitter = Vec3(3.0, 5.0, 1.5);
  s.camera.position = s.emitter;
  s.receiver_baseline = 0.0;
  Box box;
  box.center = Vec3(5.0, 5.0, 1.0);
  box.half_extent = Vec3(1.0, 1.0, 1.0);
  box.absorption = 0.5;
  s.obstacles.push_back(box);
  int hits = 0;
  for (const auto& p : trace_image_sources(s, 1)) {
    if (std::abs(p.path_length - 2.0) < 1e-12) {
      EXPECT_NEAR(p.amplitude, 0.5 / 2.0, 1e-12);
      ++hits;
    }
  }
  EXPECT_EQ(hits, 2);
}

TEST(ImageSources, RejectsBadOrder) {
  EXPECT_THROW(trace_image_sources(empty_room(), -1), Error);
  EXPECT_THROW(trace_image_sources(empty_room(), kMaxReflectionOrder + 1), Error);
}

TEST(Render, EchoPeakAtAnalyticSample) {
  const auto chirp = signal::synthesize_chirp();
  EchoPath path;
  path.path_length = 4.0;
  path.amplitude = 1.0;
  path.arrival_direction = Vec3::UnitX();
  RenderOptions options;
  options.snr_db = std::numeric_limits<double>::infinity();
  const auto clip = render_binaural_echo(std::span(&path, 1), chirp, signal::kSampleRate,
                                         options);
  signal::BinauralRecording rec{clip.left, clip.left};
  EXPECT_NEAR(signal::locate_chirp_onset(rec, chirp), 514, 1);
}

TEST(Render, SilentAfterDirectArrival) {
  const auto chirp = signal::synthesize_chirp();
  EchoPath path;
  path.path_length = 0.1;
  path.amplitude = 1.0;
  RenderOptions options;
  options.snr_db = std::numeric_limits<double>::infinity();
  const auto clip = render_binaural_echo(std::span(&path, 1), chirp, signal::kSampleRate,
                                         options);
  const int end = static_cast<int>(std::ceil(0.1 / kSpeedOfSound * signal::kSampleRate)) +
                  chirp.size() + 1;
  for (int i = end; i < signal::kClipSamples; ++i) {
    ASSERT_EQ(clip.left[i], 0.0f);
    ASSERT_EQ(clip.right[i], 0.0f);
  }
}

TEST(Render, WindowCoversTwelveMetreRange) {
  const double one_way = signal::kClipSamples / signal::kSampleRate * kSpeedOfSound / 2;
  EXPECT_NEAR(one_way, 12.44, 0.01);
  EchoPath far;
  far.path_length = 2 * 12.5;
  EchoPath near;
  near.path_length = 2 * 12.0;
  const std::vector<EchoPath> all = {far, near};
  EXPECT_EQ(paths_within_window(all).size(), 1u);
}

TEST(Render, DeterministicForSeed) {
  std::mt19937_64 rng(5);
  const RoomScene s = random_shoebox(rng);
  const auto paths = paths_within_window(trace_image_sources(s, 2));
  const auto chirp = signal::synthesize_chirp();
  RenderOptions o;
  o.head = head_orientation(s);
  o.noise_seed = 9;
  const auto a = render_binaural_echo(paths, chirp, signal::kSampleRate, o);
  const auto b = render_binaural_echo(paths, chirp, signal::kSampleRate, o);
  EXPECT_EQ(a.left, b.left);
  EXPECT_EQ(a.right, b.right);
}

TEST(Pinna, NearEarIsLouderAndBrighterInFront) {
  HeadOrientation head;
  const auto right_near = pinna_response(head.right, Ear::kRight, head);
  const auto left_far = pinna_response(head.right, Ear::kLeft, head);
  EXPECT_DOUBLE_EQ(right_near.gain, 1.0);
  EXPECT_DOUBLE_EQ(left_far.gain, 0.5);
  EXPECT_DOUBLE_EQ(pinna_response(head.forward, Ear::kLeft, head).cutoff_hz, 20000.0);
  EXPECT_DOUBLE_EQ(pinna_response(-head.forward, Ear::kLeft, head).cutoff_hz, 4000.0);
}

TEST(Raycast, FacingWallSixMetresAway) {
  RoomScene s = empty_room();
  s.room_size = Vec3(8.0, 4.0, 3.0);
  s.emitter = Vec3(2.0, 2.0, 1.5);
  s.camera.position = s.emitter;
  const auto depth = render_depth_map(s, 16);
  // The 16 x 16 grid has no center pixel; the four central ones see the wall
  // straight on, and planar depth is the same across a frontal wall.
  EXPECT_NEAR(depth.at(7, 7), 0.5, 1e-6);
  EXPECT_NEAR(depth.at(8, 8), 0.5, 1e-6);
}

TEST(Raycast, ClipsBeyondTwelveMetres) {
  RoomScene s = empty_room();
  s.room_size = Vec3(30.0, 4.0, 3.0);
  s.emitter = Vec3(1.0, 2.0, 1.5);
  s.camera.position = s.emitter;
  const auto depth = render_depth_map(s, 16);
  EXPECT_FLOAT_EQ(depth.at(7, 8), 1.0f);
}

TEST(Raycast, ValuesInUnitRangeAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RoomScene s = random_scene(seed);
    const auto d = render_depth_map(s, 32);
    const auto g = render_grayscale(s, 32);
    for (float v : d.pixels) ASSERT_TRUE(v >= 0.0f && v <= 1.0f);
    for (float v : g.pixels) ASSERT_TRUE(v >= 0.0f && v <= 1.0f);
    EXPECT_EQ(d.pixels, render_depth_map(s, 32).pixels);
    EXPECT_EQ(g.pixels, render_grayscale(s, 32).pixels);
  }
}

TEST(Raycast, FrontalWallRowsAreSymmetric) {
  RoomScene s = empty_room();
  s.room_size = Vec3(6.0, 4.0, 3.0);
  s.emitter = Vec3(2.0, 2.0, 1.5);
  s.camera.position = s.emitter;
  const auto g = render_grayscale(s, 16);
  for (int row = 0; row < 16; ++row)
    for (int col = 0; col < 8; ++col)
      EXPECT_NEAR(g.at(row, col), g.at(row, 15 - col), 1e-5);
}

TEST(Raycast, ObstacleIsCloserThanWall) {
  RoomScene s = empty_room();
  s.room_size = Vec3(10.0, 4.0, 3.0);
  s.emitter = Vec3(1.0, 2.0, 1.5);
  s.camera.position = s.emitter;
  Box box;
  box.center = Vec3(4.0, 2.0, 1.5);
  box.half_extent = Vec3(0.5, 0.5, 0.5);
  s.obstacles.push_back(box);
  const auto d = render_depth_map(s, 16);
  EXPECT_NEAR(d.at(8, 8), 2.5 / 12.0, 1e-6);
}

TEST(Scene, SerializationRoundTrip) {
  const RoomScene s = random_scene(42);
  const RoomScene back = parse_scene(serialize_scene(s));
  EXPECT_EQ(serialize_scene(back), serialize_scene(s));
  EXPECT_EQ(scene_hash(back), scene_hash(s));
}

TEST(Scene, RandomScenesAreValidAndSeeded) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RoomScene s = random_scene(seed);
    EXPECT_NO_THROW(validate(s));
    EXPECT_LE(s.obstacles.size(), 6u);
    EXPECT_EQ(serialize_scene(s), serialize_scene(random_scene(seed)));
  }
  EXPECT_NE(scene_hash(random_scene(1)), scene_hash(random_scene(2)));
}

TEST(Scene, RejectsEmitterOutsideRoom) {
  RoomScene s = empty_room();
  s.emitter = Vec3(5.0, 2.0, 1.0);
  EXPECT_THROW(validate(s), Error);
}

}  // namespace
}  // namespace echo2depth::sim
