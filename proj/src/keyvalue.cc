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

#include "echo2depth/keyvalue.h"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "echo2depth/error.h"

namespace echo2depth {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Number>
Number parse_number(std::string_view key, std::string_view text) {
  Number value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  require(ec == std::errc() && ptr == end, ErrorCode::kInvalidArgument,
          "cannot parse value '" + std::string(text) + "' for key '" +
              std::string(key) + "'");
  return value;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text) {
  KeyValueFile file;
  int line_number = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{}
                                             : text.substr(newline + 1);
    ++line_number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorCode::kInvalidArgument,
            "line " + std::to_string(line_number) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    require(!key.empty(), ErrorCode::kInvalidArgument,
            "line " + std::to_string(line_number) + ": empty key");
    file.entries_.emplace_back(std::string(key),
                               std::string(trim(line.substr(eq + 1))));
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kNotFound,
          "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string KeyValueFile::serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

void KeyValueFile::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo,
          "cannot write " + path.string());
  out << serialize();
  require(static_cast<bool>(out), ErrorCode::kIo,
          "short write to " + path.string());
}

bool KeyValueFile::has(std::string_view key) const {
  for (const auto& entry : entries_) {
    if (entry.first == key) return true;
  }
  return false;
}

const std::string& KeyValueFile::get(std::string_view key) const {
  for (const auto& entry : entries_) {
    if (entry.first == key) return entry.second;
  }
  throw Error(ErrorCode::kNotFound, "missing key '" + std::string(key) + "'");
}

std::vector<std::string> KeyValueFile::get_all(std::string_view key) const {
  std::vector<std::string> values;
  for (const auto& entry : entries_) {
    if (entry.first == key) values.push_back(entry.second);
  }
  return values;
}

std::string KeyValueFile::get_or(std::string_view key,
                                 std::string fallback) const {
  return has(key) ? get(key) : fallback;
}

double KeyValueFile::get_double(std::string_view key) const {
  const auto& text = get(key);
  if (text == "inf") return std::numeric_limits<double>::infinity();
  return parse_number<double>(key, text);
}

double KeyValueFile::get_double_or(std::string_view key,
                                   double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueFile::get_int(std::string_view key) const {
  return parse_number<std::int64_t>(key, get(key));
}

std::int64_t KeyValueFile::get_int_or(std::string_view key,
                                      std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueFile::get_uint(std::string_view key) const {
  return parse_number<std::uint64_t>(key, get(key));
}

bool KeyValueFile::get_bool_or(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& text = get(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::kInvalidArgument,
              "expected boolean for '" + std::string(key) + "'");
}

void KeyValueFile::set(std::string key, std::string value) {
  std::erase_if(entries_, [&](const Entry& e) { return e.first == key; });
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueFile::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> values;
  while (true) {
    const auto start = text.find_first_not_of(" \t,");
    if (start == std::string_view::npos) break;
    text = text.substr(start);
    const auto stop = text.find_first_of(" \t,");
    const auto token = text.substr(0, stop);
    values.push_back(parse_number<double>("list", token));
    if (stop == std::string_view::npos) break;
    text = text.substr(stop);
  }
  return values;
}

std::string format_double(double value) {
  // Shortest representation that round-trips.
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace echo2depth
