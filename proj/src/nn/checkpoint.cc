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

#include "echo2depth/nn/checkpoint.h"

#include <zlib.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unordered_map>

namespace echo2depth::nn {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'E', '2', 'D', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  out.append(bytes, 4);
}

class Reader {
 public:
  Reader(const std::string& data, std::size_t end) : data_(data), end_(end) {}

  std::uint32_t u32() {
    std::uint32_t v;
    std::memcpy(&v, take(4), 4);
    return v;
  }
  std::string bytes(std::size_t n) { return std::string(take(n), n); }
  void floats(float* dst, std::size_t n) { std::memcpy(dst, take(n * 4), n * 4); }
  bool done() const { return pos_ == end_; }

 private:
  const char* take(std::size_t n) {
    require(n <= end_ - pos_, ErrorCode::kCorrupt, "checkpoint truncated");
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }

  const std::string& data_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t checksum(const char* data, std::size_t n) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(n)));
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint,
                     const std::filesystem::path& path) {
  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(checkpoint.config.size()));
  out += checkpoint.config;
  put_u32(out, static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const NamedTensor& t : checkpoint.tensors) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out += t.name;
    const Shape s = t.value.shape();
    for (int d : {s.n, s.c, s.h, s.w}) put_u32(out, static_cast<std::uint32_t>(d));
    out.append(reinterpret_cast<const char*>(t.value.data()), t.value.size() * 4);
  }
  put_u32(out, checksum(out.data(), out.size()));

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(file), ErrorCode::kIo,
            "cannot write checkpoint " + tmp.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    require(static_cast<bool>(file), ErrorCode::kIo,
            "failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  require(static_cast<bool>(file), ErrorCode::kNotFound,
          "cannot open checkpoint " + path.string());
  const std::string data((std::istreambuf_iterator<char>(file)),
                         std::istreambuf_iterator<char>());
  require(data.size() >= sizeof(kMagic) + 4 &&
              std::memcmp(data.data(), kMagic, sizeof(kMagic)) == 0,
          ErrorCode::kCorrupt, path.string() + " is not a checkpoint");
  const std::size_t body = data.size() - 4;
  std::uint32_t stored;
  std::memcpy(&stored, data.data() + body, 4);
  require(stored == checksum(data.data(), body), ErrorCode::kCorrupt,
          "checkpoint checksum mismatch in " + path.string());

  Reader r(data, body);
  r.bytes(sizeof(kMagic));
  const std::uint32_t version = r.u32();
  require(version == kVersion, ErrorCode::kCorrupt,
          "unsupported checkpoint version " + std::to_string(version));
  Checkpoint ckpt;
  ckpt.config = r.bytes(r.u32());
  const std::uint32_t count = r.u32();
  ckpt.tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name = r.bytes(r.u32());
    Shape s;
    s.n = static_cast<int>(r.u32());
    s.c = static_cast<int>(r.u32());
    s.h = static_cast<int>(r.u32());
    s.w = static_cast<int>(r.u32());
    t.value = Tensor<float>(s);
    r.floats(t.value.data(), t.value.size());
    ckpt.tensors.push_back(std::move(t));
  }
  require(r.done(), ErrorCode::kCorrupt, "trailing bytes in checkpoint");
  return ckpt;
}

Checkpoint capture(const ParameterList<float>& params, std::string config) {
  Checkpoint ckpt{std::move(config), {}};
  ckpt.tensors.reserve(params.size());
  for (const Parameter<float>* p : params) ckpt.tensors.push_back({p->name, p->value});
  return ckpt;
}

void restore(const Checkpoint& checkpoint, const ParameterList<float>& params) {
  std::unordered_map<std::string, const Tensor<float>*> by_name;
  for (const NamedTensor& t : checkpoint.tensors) {
    require(by_name.emplace(t.name, &t.value).second, ErrorCode::kCorrupt,
            "duplicate tensor " + t.name + " in checkpoint");
  }
  require(by_name.size() == params.size(), ErrorCode::kInvalidArgument,
          "checkpoint holds " + std::to_string(by_name.size()) +
              " tensors, model expects " + std::to_string(params.size()));
  for (Parameter<float>* p : params) {
    auto it = by_name.find(p->name);
    require(it != by_name.end(), ErrorCode::kNotFound,
            "checkpoint lacks tensor " + p->name);
    require(it->second->shape() == p->value.shape(), ErrorCode::kInvalidArgument,
            "shape mismatch for " + p->name + ": " + it->second->shape().str() +
                " vs " + p->value.shape().str());
    p->value = *it->second;
  }
}

}  // namespace echo2depth::nn
