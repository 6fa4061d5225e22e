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

#include <filesystem>
#include <fstream>
#include <random>

#include "echo2depth/dataset_store.h"
#include "echo2depth/error.h"
#include "../support/temp_dir.h"

namespace echo2depth::data {
namespace {

namespace fs = std::filesystem;

SampleRecord fake_record(std::uint64_t seed, Split split, int res = 16) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> audio(-1, 1), pixel(0, 1);
  SampleRecord r;
  r.id = "s" + std::to_string(seed);
  r.scene_seed = seed;
  r.scene_hash = "00000000000000ff";
  r.split = split;
  for (int i = 0; i < signal::kClipSamples; ++i) {
    r.clip.left.push_back(audio(rng));
    r.clip.right.push_back(audio(rng));
  }
  r.depth.resolution = r.gray.resolution = res;
  for (int i = 0; i < res * res; ++i) {
    r.depth.pixels.push_back(pixel(rng));
    r.gray.pixels.push_back(pixel(rng));
  }
  return r;
}

std::vector<SampleRecord> fake_set(int train, int val, int test) {
  std::vector<SampleRecord> out;
  std::uint64_t seed = 100;
  for (int i = 0; i < train; ++i) out.push_back(fake_record(seed++, Split::kTrain));
  for (int i = 0; i < val; ++i) out.push_back(fake_record(seed++, Split::kVal));
  for (int i = 0; i < test; ++i) out.push_back(fake_record(seed++, Split::kTest));
  return out;
}

TEST(Dataset, ManifestCounts) {
  testing::TempDir dir;
  const Manifest m = write_dataset(fake_set(8, 1, 1), dir.path());
  EXPECT_EQ(m.ids_for(Split::kTrain).size(), 8u);
  EXPECT_EQ(m.ids_for(Split::kVal).size(), 1u);
  EXPECT_EQ(m.ids_for(Split::kTest).size(), 1u);
  const Manifest back = read_manifest(dir.path());
  EXPECT_EQ(back.ids, m.ids);
  EXPECT_EQ(back.resolution, 16);
}

TEST(Dataset, RoundTripIsExactForAudioAndWithinQuantizationForImages) {
  testing::TempDir dir;
  const auto set = fake_set(3, 2, 2);
  write_dataset(set, dir.path());
  std::size_t seen = 0;
  for (Split split : kAllSplits) {
    for (const SampleRecord& r : read_dataset(dir.path(), split)) {
      const auto& orig = *std::find_if(set.begin(), set.end(),
                                       [&](const SampleRecord& s) { return s.id == r.id; });
      EXPECT_EQ(r.split, split);
      EXPECT_EQ(r.clip.left, orig.clip.left);
      EXPECT_EQ(r.clip.right, orig.clip.right);
      EXPECT_EQ(r.scene_seed, orig.scene_seed);
      EXPECT_EQ(r.scene_hash, orig.scene_hash);
      for (std::size_t i = 0; i < r.depth.pixels.size(); ++i) {
        ASSERT_LE(std::abs(r.depth.pixels[i] - orig.depth.pixels[i]), 0.5 / 65535 + 1e-7);
        ASSERT_LE(std::abs(r.gray.pixels[i] - orig.gray.pixels[i]), 0.5 / 65535 + 1e-7);
      }
      ++seen;
    }
  }
  EXPECT_EQ(seen, set.size());
}

TEST(Pgm16, HalfQuantizesToMidScale) {
  testing::TempDir dir;
  signal::SquareImage im;
  im.resolution = 1;
  im.pixels = {0.5f};
  write_pgm16(im, dir.path() / "half.pgm");
  std::ifstream in(dir.path() / "half.pgm", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), {});
  const auto hi = static_cast<unsigned char>(bytes[bytes.size() - 2]);
  const auto lo = static_cast<unsigned char>(bytes[bytes.size() - 1]);
  EXPECT_NEAR(hi * 256 + lo, 32768, 1);
  EXPECT_EQ(bytes.substr(0, 2), "P5");
  EXPECT_NEAR(read_pgm16(dir.path() / "half.pgm").pixels[0], 0.5f, 1.0f / 65535);
}

TEST(Pgm16, RejectsOutOfRangeValues) {
  testing::TempDir dir;
  signal::SquareImage im;
  im.resolution = 1;
  im.pixels = {1.5f};
  EXPECT_THROW(write_pgm16(im, dir.path() / "bad.pgm"), Error);
}

TEST(Dataset, DetectsCorruptedAudio) {
  testing::TempDir dir;
  const Manifest m = write_dataset(fake_set(2, 0, 0), dir.path());
  const fs::path audio = dir.path() / "train" / m.ids_for(Split::kTrain)[0] / "audio.f32";
  {
    std::fstream f(audio, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x7f');
  }
  SplitReader reader(dir.path(), Split::kTrain);
  try {
    reader.read(0);
    FAIL() << "corruption not detected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorrupt);
  }
  EXPECT_NO_THROW(reader.read(1));
}

TEST(Dataset, RefusesToOverwriteWithoutForce) {
  testing::TempDir dir;
  write_dataset(fake_set(1, 0, 0), dir.path());
  try {
    write_dataset(fake_set(1, 0, 0), dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAlreadyExists);
  }
  EXPECT_NO_THROW(write_dataset(fake_set(2, 0, 0), dir.path(), {true}));
  EXPECT_EQ(read_manifest(dir.path()).ids_for(Split::kTrain).size(), 2u);
}

TEST(Dataset, MissingManifestIsNotFound) {
  testing::TempDir dir;
  try {
    read_manifest(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Generation, SplitSeedRangesAreDisjoint) {
  GenerationConfig config;
  config.counts = {6, 3, 3};
  config.base_seed = 50;
  const auto samples = generate_samples(config);
  ASSERT_EQ(samples.size(), 12u);
  testing::TempDir dir;
  const Manifest m = write_dataset(samples, dir.path());
  EXPECT_FALSE(m.seeds_for(Split::kTrain).overlaps(m.seeds_for(Split::kTest)));
  EXPECT_FALSE(m.seeds_for(Split::kTrain).overlaps(m.seeds_for(Split::kVal)));
  for (const auto& r : read_dataset(dir.path(), Split::kTest)) {
    EXPECT_FALSE(m.seeds_for(Split::kTrain).contains(r.scene_seed));
    EXPECT_TRUE(m.seeds_for(Split::kTest).contains(r.scene_seed));
  }
}

TEST(Generation, DefaultSizesAndDeterminism) {
  EXPECT_EQ(GenerationConfig{}.counts, (std::array<int, 3>{3950, 750, 504}));
  GenerationConfig config;
  config.counts = {2, 1, 1};
  config.base_seed = 9;
  const auto a = generate_samples(config);
  const auto b = generate_samples(config);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].clip.left, b[i].clip.left);
    EXPECT_EQ(a[i].depth.pixels, b[i].depth.pixels);
    EXPECT_NO_THROW(signal::validate(a[i].clip));
  }
}

TEST(Downsample, DepthIgnoresInvalidPixels) {
  signal::DepthMap d;
  d.resolution = 2;
  d.pixels = {0.0f, 0.4f, 0.6f, 0.0f};
  EXPECT_FLOAT_EQ(downsample_depth(d, 1).pixels[0], 0.5f);
  d.pixels = {0, 0, 0, 0};
  EXPECT_FLOAT_EQ(downsample_depth(d, 1).pixels[0], 0.0f);
  signal::GrayImage g;
  g.resolution = 2;
  g.pixels = {0.0f, 0.4f, 0.6f, 0.2f};
  EXPECT_FLOAT_EQ(downsample_gray(g, 1).pixels[0], 0.3f);
  EXPECT_THROW(downsample_gray(g, 3), Error);
}

}  // namespace
}  // namespace echo2depth::data
