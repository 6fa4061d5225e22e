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

#ifndef ECHO2DEPTH_DATASET_STORE_H_
#define ECHO2DEPTH_DATASET_STORE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "echo2depth/signal_pipeline.h"

namespace echo2depth::data {

enum class Split { kTrain = 0, kVal = 1, kTest = 2 };

inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kVal,
                                                    Split::kTest};

const char* split_name(Split split);
Split parse_split(std::string_view name);

struct SampleRecord {
  std::string id;
  signal::BinauralClip clip;
  signal::DepthMap depth;
  signal::GrayImage gray;
  std::uint64_t scene_seed = 0;
  std::string scene_hash;
  Split split = Split::kTrain;
};

// Half-open seed interval [first, last).
struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;

  bool contains(std::uint64_t seed) const { return seed >= first && seed < last; }
  bool empty() const { return first >= last; }
  bool overlaps(const SeedRange& other) const {
    return !empty() && !other.empty() && first < other.last &&
           other.first < last;
  }
};

struct Manifest {
  int resolution = 0;
  std::array<std::vector<std::string>, 3> ids;
  std::array<SeedRange, 3> seeds;

  const std::vector<std::string>& ids_for(Split split) const {
    return ids[static_cast<int>(split)];
  }
  const SeedRange& seeds_for(Split split) const {
    return seeds[static_cast<int>(split)];
  }
};

struct WriteOptions {
  bool force = false;  // allow replacing an existing manifest
};

// Layout: root/{split}/{id}/{audio.f32,depth.pgm16,gray.pgm16,meta.txt} and
// root/manifest.txt. See docs/FORMATS.md.
Manifest write_dataset(std::span<const SampleRecord> samples,
                       const std::filesystem::path& root,
                       const WriteOptions& options = {});

Manifest read_manifest(const std::filesystem::path& root);

// Random access over one split in manifest order; every read verifies
// checksums and manifest consistency.
class SplitReader {
 public:
  SplitReader(std::filesystem::path root, Split split);

  const Manifest& manifest() const { return manifest_; }
  Split split() const { return split_; }
  std::size_t size() const { return manifest_.ids_for(split_).size(); }
  SampleRecord read(std::size_t index) const;

 private:
  std::filesystem::path root_;
  Split split_;
  Manifest manifest_;
};

std::vector<SampleRecord> read_dataset(const std::filesystem::path& root,
                                       Split split);

// 16-bit binary portable graymap (P5, maxval 65535, big-endian samples);
// value = round(v * 65535).
void write_pgm16(const signal::SquareImage& image,
                 const std::filesystem::path& path);
signal::SquareImage read_pgm16(const std::filesystem::path& path);
// Row-major width x height graymap with the same encoding.
void write_pgm16(std::span<const float> pixels, int width, int height,
                 const std::filesystem::path& path);

// Raw little-endian float32, interleaved left/right.
void write_audio_f32(const signal::BinauralClip& clip,
                     const std::filesystem::path& path);
signal::BinauralClip read_audio_f32(const std::filesystem::path& path);

// Box-filter downsampling by an integer factor. Depth averages valid
// (non-zero) pixels only, keeping 0 where a block has none.
signal::DepthMap downsample_depth(const signal::DepthMap& depth, int resolution);
signal::GrayImage downsample_gray(const signal::GrayImage& gray, int resolution);

struct GenerationConfig {
  std::array<int, 3> counts = {3950, 750, 504};
  std::uint64_t base_seed = 0;
  int resolution = 16;
  int max_order = 2;
  double snr_db = 30.0;
};

// Simulates samples; split s draws scene seeds from a contiguous range that
// starts where the previous split's range ends.
std::vector<SampleRecord> generate_samples(const GenerationConfig& config);

}  // namespace echo2depth::data

#endif  // ECHO2DEPTH_DATASET_STORE_H_
