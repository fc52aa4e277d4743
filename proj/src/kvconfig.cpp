// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/kvconfig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rnspim/errors.hpp"

namespace rnspim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_u64(std::string_view token, const std::string& key) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    throw ConfigError("key '" + key + "': '" + std::string(token) +
                      "' is not an unsigned integer");
  }
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": missing '='");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (config.entries_.count(key) != 0) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    config.entries_.emplace(key, std::string(trim(line.substr(eq + 1))));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

bool KeyValueConfig::contains(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint64_t> KeyValueConfig::get_u64(
    const std::string& key) const {
  const auto value = get(key);
  if (!value) return std::nullopt;
  return parse_u64(*value, key);
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  const auto value = get(key);
  if (!value) return std::nullopt;
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(*value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value->size()) {
    throw ConfigError("key '" + key + "': '" + *value + "' is not a number");
  }
  return d;
}

std::optional<std::vector<std::uint64_t>> KeyValueConfig::get_u64_list(
    const std::string& key) const {
  const auto value = get(key);
  if (!value) return std::nullopt;
  std::vector<std::uint64_t> out;
  std::string_view rest = *value;
  while (true) {
    const auto start = rest.find_first_not_of(" \t,");
    if (start == std::string_view::npos) break;
    rest = rest.substr(start);
    const auto stop = rest.find_first_of(" \t,");
    out.push_back(parse_u64(rest.substr(0, stop), key));
    if (stop == std::string_view::npos) break;
    rest = rest.substr(stop);
  }
  return out;
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  entries_[key] = std::move(value);
}

void KeyValueConfig::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

std::string KeyValueConfig::to_string() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace rnspim
