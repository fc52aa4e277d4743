// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Plain "key = value" text configuration. '#' starts a comment; blank lines
// are ignored; keys are case-sensitive and may appear once.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rnspim {

class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  // Throws ConfigError on a line without '=', an empty key or a duplicate.
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load_file(const std::string& path);

  bool contains(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  // Typed lookups; a present but malformed value throws ConfigError.
  std::optional<std::uint64_t> get_u64(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::vector<std::uint64_t>> get_u64_list(
      const std::string& key) const;

  void set(const std::string& key, std::string value);

  // Throws ConfigError naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const noexcept {
    return entries_;
  }

  std::string to_string() const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace rnspim
