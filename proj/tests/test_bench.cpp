// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/bench.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rnspim/errors.hpp"

namespace rnspim::bench {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// Fixed scenario whose CSV is checked in under tests/golden.
Scenario golden_scenario() {
  Scenario s;
  s.n = 2048;
  s.phases = {pimsim::KernelKind::kNtt};
  s.config.platform = pimsim::PlatformModel::with_dpus(128);
  return s;
}

TEST(Params, ListsEveryModulus) {
  const auto text = format_params(4096, 109);
  EXPECT_NE(text.find("k = 4"), std::string::npos);
  for (const char* p : {"1073692673", "1073668097", "1073651713", "1073643521"}) {
    EXPECT_NE(text.find(p), std::string::npos) << p;
  }
  EXPECT_NE(text.find("# config\n"), std::string::npos);
  EXPECT_THROW(format_params(1000, 27), DomainError);
}

TEST(Verify, PassesOnCorrectTables) {
  VerifyOptions o;
  o.n = 64;
  o.trials = 5;
  const auto r = run_verify(o);
  EXPECT_TRUE(r.passed);
  ASSERT_EQ(r.lines.size(), 3u);
  for (const auto& line : r.lines) EXPECT_EQ(line.rfind("PASS ", 0), 0u) << line;
}

TEST(Verify, ZeroTrialsWarnsAndPasses) {
  VerifyOptions o;
  o.n = 64;
  o.trials = 0;
  const auto r = run_verify(o);
  EXPECT_TRUE(r.passed);
  ASSERT_EQ(r.lines.size(), 1u);
  EXPECT_NE(r.lines[0].find("warning"), std::string::npos);
}

TEST(Verify, CorruptTwiddleNamesFirstFailure) {
  VerifyOptions o;
  o.n = 64;
  o.trials = 4;
  o.seed = 17;
  o.corrupt_twiddle = true;
  const auto r = run_verify(o);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.failing_seed.has_value());
  EXPECT_EQ(*r.failing_seed, 17u);
  EXPECT_EQ(r.failed_invariant, "ntt round-trip");
  EXPECT_EQ(r.lines.back(), "first failure: ntt round-trip at seed 17");
}

TEST(Strategy, AutoFollowsRankDivisibility) {
  pimsim::PlatformModel p;
  p.ranks = 6;
  EXPECT_EQ(auto_strategy(p, 3), pimsim::Strategy::kModulusParallel);
  EXPECT_EQ(auto_strategy(p, 4), pimsim::Strategy::kModulusSequential);
}

TEST(Sweep, DpuAxisPicksStrategyPerPoint) {
  Scenario s;
  s.n = 4096;
  s.bits = 90;  // k = 3
  s.ciphertexts = 64;
  const auto rows = run_sweep(s, SweepAxis::kDpus, default_axis_values(SweepAxis::kDpus));
  ASSERT_EQ(rows.size(), 5u);
  const char* expected[] = {"sequential", "parallel", "sequential", "parallel",
                            "sequential"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].num_moduli, 3u);
    EXPECT_EQ(rows[i].dpus, rows[i].axis_value);
    EXPECT_EQ(rows[i].strategy, expected[i]) << rows[i].axis_value;
    EXPECT_TRUE(rows[i].error.empty());
  }
}

TEST(Sweep, RowsKeepRequestOrder) {
  const auto rows = run_sweep(golden_scenario(), SweepAxis::kCiphertexts,
                              {64, 1, 512, 8});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].axis_value, 64u);
  EXPECT_EQ(rows[2].ciphertexts, 512u);
  EXPECT_GT(rows[2].makespan_cycles, rows[3].makespan_cycles);
}

TEST(Sweep, NAxisRejectsNonPowerOfTwo) {
  EXPECT_THROW(run_sweep(golden_scenario(), SweepAxis::kN, {1000}), DomainError);
  const auto rows = run_sweep(golden_scenario(), SweepAxis::kN, {1024, 8192});
  EXPECT_EQ(rows[0].bits, 27u);
  EXPECT_EQ(rows[1].bits, 218u);
}

TEST(Sweep, PlanningFailureLandsInErrorColumn) {
  Scenario s = golden_scenario();
  s.config.platform = pimsim::PlatformModel::with_dpus(1);
  s.strategy = pimsim::Strategy::kModulusParallel;
  const auto row = run_point(s);
  EXPECT_NE(row.error.find("modulus-sequential"), std::string::npos);
  const auto csv = to_csv({row});
  const auto lines = split(csv, '\n');
  ASSERT_GE(lines.size(), 3u);
  const auto fields = split(lines[2], ',');
  EXPECT_EQ(fields[13], "");  // makespan_cycles left blank
}

TEST(Csv, SchemaIsVersionedAndRectangular) {
  const auto rows = run_sweep(golden_scenario(), SweepAxis::kCiphertexts, {1, 2});
  const auto lines = split(to_csv(rows), '\n');
  ASSERT_EQ(lines.size(), 5u);  // trailing newline leaves an empty last field
  EXPECT_EQ(lines[0], kCsvVersionLine);
  EXPECT_EQ(lines[1], csv_header());
  const auto columns = split(lines[1], ',').size();
  EXPECT_EQ(columns, 19u);
  EXPECT_EQ(split(lines[2], ',').size(), columns);
  EXPECT_EQ(split(lines[3], ',').size(), columns);
}

TEST(Csv, MatchesGoldenFile) {
  std::ifstream in(RNSPIM_GOLDEN_DIR "/sweep_n2048_128dpus.csv");
  ASSERT_TRUE(in) << "missing golden file";
  // Skip the license lines ahead of the CSV proper.
  std::string golden, line;
  while (std::getline(in, line)) {
    if (line.rfind("# Copyright", 0) == 0 || line.rfind("# SPDX", 0) == 0) continue;
    golden += line + "\n";
  }
  const auto rows = run_sweep(golden_scenario(), SweepAxis::kCiphertexts,
                              default_axis_values(SweepAxis::kCiphertexts));
  EXPECT_EQ(to_csv(rows), golden);
}

TEST(Svg, ContainsBothSeries) {
  const auto rows = run_sweep(golden_scenario(), SweepAxis::kCiphertexts, {1, 64, 512});
  const auto svg = to_svg(rows, SweepAxis::kCiphertexts);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
}

TEST(Axis, ParseAndDefaults) {
  EXPECT_EQ(parse_axis("dpus"), SweepAxis::kDpus);
  EXPECT_THROW(parse_axis("threads"), ConfigError);
  EXPECT_EQ(default_axis_values(SweepAxis::kCiphertexts).size(), 13u);
  EXPECT_EQ(default_axis_values(SweepAxis::kCiphertexts).back(), 4096u);
}

TEST(Scenario, WarnsOnNonStandardLength) {
  Scenario s;
  s.n = 512;
  EXPECT_EQ(s.warnings().size(), 1u);
  EXPECT_EQ(s.effective_bits(), 27u);
  s.n = 2048;
  EXPECT_TRUE(s.warnings().empty());
}

}  // namespace
}  // namespace rnspim::bench
