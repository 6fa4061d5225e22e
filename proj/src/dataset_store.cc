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

#include "echo2depth/dataset_store.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "echo2depth/error.h"
#include "echo2depth/keyvalue.h"
#include "echo2depth/scene.h"
#include "echo2depth/synthesis.h"

namespace echo2depth::data {
namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestName = "manifest.txt";
constexpr const char* kFormatTag = "echo2depth-dataset-1";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kNotFound,
          "missing file " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo,
          "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::kIo,
          "short write to " + path.string());
}

std::string crc32_hex(std::string_view bytes) {
  const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
                           static_cast<uInt>(bytes.size()));
  char buffer[9];
  std::snprintf(buffer, sizeof(buffer), "%08lx", static_cast<unsigned long>(crc));
  return buffer;
}

std::string encode_pgm16(std::span<const float> pixels, int width, int height) {
  require(width > 0 && height > 0 &&
              pixels.size() == static_cast<std::size_t>(width) * height,
          ErrorCode::kInvalidArgument, "graymap size does not match its pixels");
  std::string bytes = "P5\n" + std::to_string(width) + " " +
                      std::to_string(height) + "\n65535\n";
  bytes.reserve(bytes.size() + 2 * pixels.size());
  for (float v : pixels) {
    require(v >= 0.0f && v <= 1.0f, ErrorCode::kInvalidArgument,
            "graymap value outside [0, 1]");
    const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    bytes.push_back(static_cast<char>(q >> 8));
    bytes.push_back(static_cast<char>(q & 0xff));
  }
  return bytes;
}

std::string encode_pgm16(const signal::SquareImage& image) {
  signal::validate(image);
  return encode_pgm16(image.pixels, image.resolution, image.resolution);
}

signal::SquareImage decode_pgm16(const std::string& bytes,
                                 const std::string& label) {
  std::istringstream header(bytes);
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  header >> magic >> width >> height >> maxval;
  require(header && magic == "P5" && width == height && width > 0 &&
              maxval == 65535,
          ErrorCode::kCorrupt, label + ": not a square 16-bit P5 graymap");
  const auto offset = static_cast<std::size_t>(header.tellg()) + 1;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  require(bytes.size() == offset + 2 * count, ErrorCode::kCorrupt,
          label + ": unexpected graymap size");
  signal::SquareImage image;
  image.resolution = width;
  image.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto hi = static_cast<unsigned char>(bytes[offset + 2 * i]);
    const auto lo = static_cast<unsigned char>(bytes[offset + 2 * i + 1]);
    image.pixels[i] = static_cast<float>(((hi << 8) | lo) / 65535.0);
  }
  return image;
}

std::string encode_audio(const signal::BinauralClip& clip) {
  signal::validate(clip);
  std::string bytes(2 * signal::kClipSamples * sizeof(float), '\0');
  for (int i = 0; i < signal::kClipSamples; ++i) {
    for (int ch = 0; ch < 2; ++ch) {
      const float v = ch == 0 ? clip.left[i] : clip.right[i];
      auto word = std::bit_cast<std::uint32_t>(v);
      if constexpr (std::endian::native == std::endian::big) {
        word = __builtin_bswap32(word);
      }
      std::memcpy(bytes.data() + (2 * i + ch) * sizeof(float), &word,
                  sizeof(word));
    }
  }
  return bytes;
}

signal::BinauralClip decode_audio(const std::string& bytes,
                                  const std::string& label) {
  require(bytes.size() == 2 * signal::kClipSamples * sizeof(float),
          ErrorCode::kCorrupt, label + ": audio must hold 6400 float32 values");
  signal::BinauralClip clip;
  clip.left.resize(signal::kClipSamples);
  clip.right.resize(signal::kClipSamples);
  for (int i = 0; i < signal::kClipSamples; ++i) {
    for (int ch = 0; ch < 2; ++ch) {
      std::uint32_t word;
      std::memcpy(&word, bytes.data() + (2 * i + ch) * sizeof(float),
                  sizeof(word));
      if constexpr (std::endian::native == std::endian::big) {
        word = __builtin_bswap32(word);
      }
      (ch == 0 ? clip.left : clip.right)[i] = std::bit_cast<float>(word);
    }
  }
  return clip;
}

std::string format_range(const SeedRange& range) {
  return std::to_string(range.first) + " " + std::to_string(range.last);
}

SeedRange parse_range(const KeyValueFile& kv, const std::string& key) {
  const auto& text = kv.get(key);
  std::istringstream in(text);
  SeedRange range;
  in >> range.first >> range.last;
  require(static_cast<bool>(in) && range.first <= range.last,
          ErrorCode::kCorrupt, "bad seed range '" + text + "'");
  return range;
}

std::string sample_id(std::uint64_t seed) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%08llu",
                static_cast<unsigned long long>(seed));
  return buffer;
}

template <typename Image>
Image box_downsample(const Image& image, int resolution, bool skip_zero) {
  signal::validate(image);
  require(resolution > 0 && image.resolution % resolution == 0,
          ErrorCode::kInvalidArgument,
          "cannot downsample " + std::to_string(image.resolution) + " to " +
              std::to_string(resolution));
  const int factor = image.resolution / resolution;
  Image out;
  out.resolution = resolution;
  out.pixels.assign(static_cast<std::size_t>(resolution) * resolution, 0.0f);
  for (int r = 0; r < resolution; ++r) {
    for (int c = 0; c < resolution; ++c) {
      double sum = 0.0;
      int count = 0;
      for (int dr = 0; dr < factor; ++dr) {
        for (int dc = 0; dc < factor; ++dc) {
          const float v = image.at(r * factor + dr, c * factor + dc);
          if (skip_zero && v == 0.0f) continue;
          sum += v;
          ++count;
        }
      }
      out.at(r, c) = count > 0 ? static_cast<float>(sum / count) : 0.0f;
    }
  }
  return out;
}

}  // namespace

const char* split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  for (Split split : kAllSplits) {
    if (name == split_name(split)) return split;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown split '" + std::string(name) + "'");
}

void write_pgm16(const signal::SquareImage& image, const fs::path& path) {
  write_file(path, encode_pgm16(image));
}

void write_pgm16(std::span<const float> pixels, int width, int height,
                 const fs::path& path) {
  write_file(path, encode_pgm16(pixels, width, height));
}

signal::SquareImage read_pgm16(const fs::path& path) {
  return decode_pgm16(read_file(path), path.string());
}

void write_audio_f32(const signal::BinauralClip& clip, const fs::path& path) {
  write_file(path, encode_audio(clip));
}

signal::BinauralClip read_audio_f32(const fs::path& path) {
  return decode_audio(read_file(path), path.string());
}

Manifest write_dataset(std::span<const SampleRecord> samples,
                       const fs::path& root, const WriteOptions& options) {
  require(!samples.empty(), ErrorCode::kInvalidArgument, "no samples to write");
  const fs::path manifest_path = root / kManifestName;
  require(options.force || !fs::exists(manifest_path),
          ErrorCode::kAlreadyExists,
          manifest_path.string() + " exists; pass force to overwrite");

  if (options.force) {
    for (Split split : kAllSplits) fs::remove_all(root / split_name(split));
  }

  Manifest manifest;
  manifest.resolution = samples.front().depth.resolution;
  std::set<std::string> seen;
  std::array<bool, 3> has_seed{};
  for (const auto& sample : samples) {
    require(seen.insert(sample.id).second, ErrorCode::kInvalidArgument,
            "duplicate sample id " + sample.id);
    require(sample.depth.resolution == manifest.resolution &&
                sample.gray.resolution == manifest.resolution,
            ErrorCode::kInvalidArgument, "mixed image resolutions");
    signal::validate(sample.clip);
    signal::validate(sample.depth);
    signal::validate(sample.gray);
    const int s = static_cast<int>(sample.split);
    manifest.ids[s].push_back(sample.id);
    auto& range = manifest.seeds[s];
    if (!has_seed[s]) {
      range = {sample.scene_seed, sample.scene_seed + 1};
      has_seed[s] = true;
    } else {
      range.first = std::min(range.first, sample.scene_seed);
      range.last = std::max(range.last, sample.scene_seed + 1);
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      require(!manifest.seeds[a].overlaps(manifest.seeds[b]),
              ErrorCode::kInvalidArgument,
              std::string("seed ranges of ") + split_name(kAllSplits[a]) +
                  " and " + split_name(kAllSplits[b]) + " overlap");
    }
  }

  for (const auto& sample : samples) {
    const fs::path dir = root / split_name(sample.split) / sample.id;
    fs::create_directories(dir);
    const auto audio = encode_audio(sample.clip);
    const auto depth = encode_pgm16(sample.depth);
    const auto gray = encode_pgm16(sample.gray);
    write_file(dir / "audio.f32", audio);
    write_file(dir / "depth.pgm16", depth);
    write_file(dir / "gray.pgm16", gray);

    KeyValueFile meta;
    meta.add("id", sample.id);
    meta.add("split", split_name(sample.split));
    meta.add("seed", std::to_string(sample.scene_seed));
    meta.add("scene_hash", sample.scene_hash);
    meta.add("onset_index", std::to_string(sample.clip.onset_index));
    meta.add("resolution", std::to_string(sample.depth.resolution));
    meta.add("audio_crc32", crc32_hex(audio));
    meta.add("depth_crc32", crc32_hex(depth));
    meta.add("gray_crc32", crc32_hex(gray));
    meta.save(dir / "meta.txt");
  }

  KeyValueFile kv;
  kv.add("format", kFormatTag);
  kv.add("resolution", std::to_string(manifest.resolution));
  for (Split split : kAllSplits) {
    const int s = static_cast<int>(split);
    kv.add(std::string(split_name(split)) + "_count",
           std::to_string(manifest.ids[s].size()));
    kv.add(std::string(split_name(split)) + "_seeds",
           format_range(manifest.seeds[s]));
  }
  for (Split split : kAllSplits) {
    for (const auto& id : manifest.ids_for(split)) kv.add(split_name(split), id);
  }
  kv.save(manifest_path);
  return manifest;
}

Manifest read_manifest(const fs::path& root) {
  const fs::path path = root / kManifestName;
  require(fs::exists(path), ErrorCode::kNotFound,
          "no manifest at " + path.string());
  const auto kv = KeyValueFile::load(path);
  require(kv.get_or("format", "") == kFormatTag, ErrorCode::kCorrupt,
          "unrecognised manifest format in " + path.string());
  Manifest manifest;
  manifest.resolution = static_cast<int>(kv.get_int("resolution"));
  for (Split split : kAllSplits) {
    const int s = static_cast<int>(split);
    const std::string name = split_name(split);
    manifest.ids[s] = kv.get_all(name);
    manifest.seeds[s] = parse_range(kv, name + "_seeds");
    require(static_cast<std::int64_t>(manifest.ids[s].size()) ==
                kv.get_int(name + "_count"),
            ErrorCode::kCorrupt, "manifest count mismatch for " + name);
  }
  return manifest;
}

SplitReader::SplitReader(fs::path root, Split split)
    : root_(std::move(root)), split_(split), manifest_(read_manifest(root_)) {
  const fs::path dir = root_ / split_name(split_);
  std::size_t on_disk = 0;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      on_disk += entry.is_directory() ? 1 : 0;
    }
  }
  require(on_disk == size(), ErrorCode::kCorrupt,
          std::string("manifest lists ") + std::to_string(size()) + " " +
              split_name(split_) + " samples but " + std::to_string(on_disk) +
              " exist on disk");
}

SampleRecord SplitReader::read(std::size_t index) const {
  require(index < size(), ErrorCode::kOutOfRange, "sample index out of range");
  SampleRecord record;
  record.id = manifest_.ids_for(split_)[index];
  record.split = split_;
  const fs::path dir = root_ / split_name(split_) / record.id;
  require(fs::is_directory(dir), ErrorCode::kNotFound,
          "missing sample directory " + dir.string());

  const auto meta = KeyValueFile::load(dir / "meta.txt");
  const auto audio = read_file(dir / "audio.f32");
  const auto depth = read_file(dir / "depth.pgm16");
  const auto gray = read_file(dir / "gray.pgm16");
  require(crc32_hex(audio) == meta.get("audio_crc32") &&
              crc32_hex(depth) == meta.get("depth_crc32") &&
              crc32_hex(gray) == meta.get("gray_crc32"),
          ErrorCode::kCorrupt, "checksum mismatch in " + dir.string());
  require(meta.get("id") == record.id && meta.get("split") == split_name(split_),
          ErrorCode::kCorrupt, "metadata disagrees with manifest in " + dir.string());

  record.scene_seed = meta.get_uint("seed");
  require(manifest_.seeds_for(split_).contains(record.scene_seed),
          ErrorCode::kCorrupt,
          "seed " + std::to_string(record.scene_seed) + " outside the " +
              split_name(split_) + " range");
  record.scene_hash = meta.get_or("scene_hash", "");
  record.clip = decode_audio(audio, dir.string());
  record.clip.onset_index = static_cast<int>(meta.get_int("onset_index"));
  static_cast<signal::SquareImage&>(record.depth) = decode_pgm16(depth, dir.string());
  static_cast<signal::SquareImage&>(record.gray) = decode_pgm16(gray, dir.string());
  require(record.depth.resolution == manifest_.resolution &&
              record.gray.resolution == manifest_.resolution,
          ErrorCode::kCorrupt, "image resolution disagrees with manifest");
  return record;
}

std::vector<SampleRecord> read_dataset(const fs::path& root, Split split) {
  SplitReader reader(root, split);
  std::vector<SampleRecord> records;
  records.reserve(reader.size());
  for (std::size_t i = 0; i < reader.size(); ++i) records.push_back(reader.read(i));
  return records;
}

signal::DepthMap downsample_depth(const signal::DepthMap& depth, int resolution) {
  if (depth.resolution == resolution) return depth;
  return box_downsample(depth, resolution, true);
}

signal::GrayImage downsample_gray(const signal::GrayImage& gray, int resolution) {
  if (gray.resolution == resolution) return gray;
  return box_downsample(gray, resolution, false);
}

std::vector<SampleRecord> generate_samples(const GenerationConfig& config) {
  std::vector<SampleRecord> samples;
  std::uint64_t seed = config.base_seed;
  sim::SynthesisOptions options;
  options.resolution = config.resolution;
  options.max_order = config.max_order;
  options.snr_db = config.snr_db;
  for (Split split : kAllSplits) {
    const int count = config.counts[static_cast<int>(split)];
    require(count >= 0, ErrorCode::kInvalidArgument, "negative split count");
    for (int i = 0; i < count; ++i, ++seed) {
      const auto scene = sim::random_scene(seed);
      auto synthesized = sim::synthesize_sample(scene, options);
      SampleRecord record;
      record.id = sample_id(seed);
      record.clip = std::move(synthesized.clip);
      record.depth = std::move(synthesized.depth);
      record.gray = std::move(synthesized.gray);
      record.scene_seed = seed;
      record.scene_hash = sim::scene_hash(scene);
      record.split = split;
      samples.push_back(std::move(record));
    }
  }
  return samples;
}

}  // namespace echo2depth::data
