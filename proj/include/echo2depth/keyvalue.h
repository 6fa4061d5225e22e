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

#ifndef ECHO2DEPTH_KEYVALUE_H_
#define ECHO2DEPTH_KEYVALUE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace echo2depth {

// Ordered `key = value` text. Blank lines and lines starting with '#' are
// ignored; keys may repeat (e.g. one `obstacle` line per box). Used for scene
// files, training/grid configs, dataset manifests and per-sample metadata.
class KeyValueFile {
 public:
  using Entry = std::pair<std::string, std::string>;

  static KeyValueFile parse(std::string_view text);
  static KeyValueFile load(const std::filesystem::path& path);

  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  bool has(std::string_view key) const;
  // First value for `key`; throws Error(kNotFound) when absent.
  const std::string& get(std::string_view key) const;
  std::vector<std::string> get_all(std::string_view key) const;

  std::string get_or(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key) const;
  double get_double_or(std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view key) const;
  std::int64_t get_int_or(std::string_view key, std::int64_t fallback) const;
  std::uint64_t get_uint(std::string_view key) const;
  bool get_bool_or(std::string_view key, bool fallback) const;

  // Replaces every existing value of `key` with a single entry.
  void set(std::string key, std::string value);
  // Appends without touching existing entries.
  void add(std::string key, std::string value);

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

std::vector<double> parse_numbers(std::string_view text);
std::string format_double(double value);

}  // namespace echo2depth

#endif  // ECHO2DEPTH_KEYVALUE_H_
