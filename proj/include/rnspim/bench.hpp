// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Library side of the command-line harness: parameter listing, randomized
// self-checks and simulator sweeps with CSV/SVG output.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rnspim/pimsim.hpp"

namespace rnspim::bench {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitPlanning = 3,
};

struct Scenario {
  std::size_t n = 4096;
  // 0 selects default_coefficient_bits(n).
  unsigned bits = 0;
  std::uint32_t ciphertexts = 1;
  std::vector<pimsim::KernelKind> phases = {pimsim::KernelKind::kNtt};
  std::string preset = "default";
  // Unset: ModulusParallel when the rank count divides by k, else
  // ModulusSequential.
  std::optional<pimsim::Strategy> strategy;
  // Settings loaded from a config file, before preset/platform overrides.
  pimsim::SimConfig config;

  unsigned effective_bits() const;
  // Non-fatal remarks, e.g. a non-standard polynomial length.
  std::vector<std::string> warnings() const;
};

pimsim::Strategy auto_strategy(const pimsim::PlatformModel& platform,
                               std::size_t num_moduli);

// Multi-line listing of the base: per modulus p, Barrett factor, psi and
// n^{-1}, followed by the base in config form.
std::string format_params(std::size_t n, unsigned bits);

struct VerifyOptions {
  std::size_t n = 1024;
  unsigned bits = 0;
  std::uint32_t trials = 10;
  std::uint64_t seed = 1;
  // Debug aid: perturbs one forward twiddle before the checks run.
  bool corrupt_twiddle = false;
};

struct VerifyResult {
  bool passed = true;
  std::vector<std::string> lines;
  // Seed of the first failing trial and the invariant it broke.
  std::optional<std::uint64_t> failing_seed;
  std::string failed_invariant;
};

VerifyResult run_verify(const VerifyOptions& options);

enum class SweepAxis { kCiphertexts, kDpus, kN };

const char* to_string(SweepAxis axis) noexcept;
// "ciphertexts", "dpus" or "n". Throws ConfigError otherwise.
SweepAxis parse_axis(const std::string& name);

struct SweepRow {
  std::uint64_t axis_value = 0;
  std::size_t n = 0;
  unsigned bits = 0;
  std::size_t num_moduli = 0;
  std::uint32_t ciphertexts = 0;
  std::uint32_t dpus = 0;
  std::uint32_t ranks = 0;
  std::string strategy;
  std::string preset;
  std::string phases;
  std::uint32_t bf_overhead = 0;
  std::uint32_t active_dpus = 0;
  bool imbalanced = false;
  std::uint64_t makespan_cycles = 0;
  double compute_seconds = 0;
  double transfer_seconds = 0;
  double retrieval_seconds = 0;
  double total_seconds = 0;
  // Empty on success; otherwise the planning/capacity failure.
  std::string error;
};

// Simulates one scenario. Planning and capacity failures are returned in
// the row's error column.
SweepRow run_point(const Scenario& scenario);

// One row per value, in the given order; points run concurrently.
std::vector<SweepRow> run_sweep(const Scenario& base, SweepAxis axis,
                                const std::vector<std::uint64_t>& values);

// Default values: 2^0..2^12 ciphertexts, {128,192,256,383,509} DPUs, or
// n in {1024,...,8192}.
std::vector<std::uint64_t> default_axis_values(SweepAxis axis);

inline constexpr const char* kCsvVersionLine = "# rnspim-sweep v1";
std::string csv_header();
std::string to_csv(const std::vector<SweepRow>& rows);

// Line chart of compute and total seconds against the sweep axis.
std::string to_svg(const std::vector<SweepRow>& rows, SweepAxis axis);

}  // namespace rnspim::bench
