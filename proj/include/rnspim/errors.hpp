// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnspim {

// Invalid argument or mismatched operands (shape, domain, modulus).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No further NTT-friendly prime exists in the requested bit range.
class ExhaustionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A work plan cannot be built for the requested platform/strategy.
class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data does not fit the modeled DPU memory budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed key=value configuration text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
  kTruncated,
  kBadMagic,
  kBadVersion,
  kBadHeader,
  kMisalignedOffset,
  kNonMonotoneOffsets,
  kOffsetOutOfRange,
  kBadOpcode,
  kResidueOutOfRange,
  kBadTwiddles,
  kNonZeroPadding,
};

const char* to_string(ParseErrorKind kind);

// Raised by the interface-image decoder. `kind` distinguishes the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ParseErrorKind kind() const noexcept { return kind_; }

 private:
  ParseErrorKind kind_;
};

// Raised by execute_image; `command_index` is the ordinal of the bad command.
class ExecutionError : public std::runtime_error {
 public:
  ExecutionError(std::size_t command_index, const std::string& what)
      : std::runtime_error("command " + std::to_string(command_index) + ": " +
                           what),
        command_index_(command_index) {}

  std::size_t command_index() const noexcept { return command_index_; }

 private:
  std::size_t command_index_;
};

}  // namespace rnspim
