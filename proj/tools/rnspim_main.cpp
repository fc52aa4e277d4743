// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// rnspim: parameters, self-checks, simulator sweeps and interface images.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "rnspim/bench.hpp"
#include "rnspim/errors.hpp"
#include "rnspim/kvconfig.hpp"
#include "rnspim/ntt.hpp"
#include "rnspim/pimiface.hpp"
#include "rnspim/rns.hpp"

namespace {

using namespace rnspim;

struct ScenarioFlags {
  std::size_t n = 4096;
  unsigned bits = 0;
  std::uint32_t ciphertexts = 1;
  std::uint32_t dpus = 0;
  std::uint32_t ranks = 0;
  std::string strategy = "auto";
  std::string preset = "default";
  std::string phases = "ntt";
  std::uint64_t seed = 1;
  std::string config_path;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--n", f.n, "Polynomial length (power of two)");
  cmd->add_option("--bits", f.bits, "Coefficient bits (0: default for n)");
  cmd->add_option("--ciphertexts", f.ciphertexts, "Number of ciphertexts");
  cmd->add_option("--dpus", f.dpus, "Usable DPUs (0: platform default)");
  cmd->add_option("--ranks", f.ranks, "DPU ranks (0: platform default)");
  cmd->add_option("--strategy", f.strategy, "auto, parallel or sequential")
      ->check(CLI::IsMember({"auto", "parallel", "sequential"}));
  cmd->add_option("--preset", f.preset,
                  "Cost preset: default, dummy, optimistic, native, native134")
      ->check(CLI::IsMember({"default", "dummy", "optimistic", "native", "native134"}));
  cmd->add_option("--phases", f.phases, "Comma list of ntt,intt,mul,add,bgv");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--config", f.config_path, "key=value config file");
}

bench::Scenario make_scenario(const ScenarioFlags& f, const CLI::App* cmd) {
  bench::Scenario s;
  KeyValueConfig config;
  if (!f.config_path.empty()) config = KeyValueConfig::load_file(f.config_path);
  s.config = pimsim::load_sim_config(
      config, {"n", "bits", "ciphertexts", "phases", "strategy"});

  auto given = [&](const char* flag) { return cmd->count(flag) > 0; };
  s.n = given("--n") ? f.n : config.get_u64("n").value_or(f.n);
  s.bits = given("--bits")
               ? f.bits
               : static_cast<unsigned>(config.get_u64("bits").value_or(f.bits));
  s.ciphertexts =
      given("--ciphertexts")
          ? f.ciphertexts
          : static_cast<std::uint32_t>(
                config.get_u64("ciphertexts").value_or(f.ciphertexts));
  s.phases = pimsim::parse_phases(
      given("--phases") ? f.phases : config.get("phases").value_or(f.phases));
  s.preset = given("--preset") ? f.preset : config.get("preset").value_or(f.preset);
  (void)pimsim::CostTable::preset(s.preset);

  const std::string strategy =
      given("--strategy") ? f.strategy : config.get("strategy").value_or(f.strategy);
  if (strategy == "parallel") {
    s.strategy = pimsim::Strategy::kModulusParallel;
  } else if (strategy == "sequential") {
    s.strategy = pimsim::Strategy::kModulusSequential;
  } else if (strategy != "auto") {
    throw ConfigError("unknown strategy '" + strategy + "'");
  }

  auto& platform = s.config.platform;
  if (f.ranks != 0) {
    platform.ranks = f.ranks;
    platform.defective_dpus = 0;
  }
  if (f.dpus != 0) {
    if (f.ranks == 0) {
      platform.ranks = (f.dpus + platform.dpus_per_rank - 1) / platform.dpus_per_rank;
    }
    if (f.dpus > platform.ranks * platform.dpus_per_rank) {
      throw ConfigError("--dpus exceeds the DPUs of the given ranks");
    }
    platform.defective_dpus = platform.ranks * platform.dpus_per_rank - f.dpus;
  }
  platform.validate();
  if (!is_power_of_two(s.n)) {
    throw DomainError("n = " + std::to_string(s.n) + " is not a power of two");
  }
  for (const auto& w : s.warnings()) std::cerr << "warning: " << w << "\n";
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::vector<std::uint64_t> parse_values(const std::string& list) {
  std::vector<std::uint64_t> values;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size()) throw ConfigError("bad sweep value '" + item + "'");
    values.push_back(v);
  }
  return values;
}

int run_image(std::size_t n, unsigned bits, std::uint32_t subpolys,
              std::uint64_t seed, const std::string& out_path,
              const std::string& decode_path) {
  if (!decode_path.empty()) {
    std::ifstream in(decode_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + decode_path);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    const auto c = iface::decode_image(bytes);
    std::cout << "n = " << c.header.poly_len << "\np = " << c.header.modulus
              << "\nn_inv = " << c.header.n_inv
              << "\ncommands = " << c.header.num_commands
              << "\nsubpolys = " << c.header.num_subpolys << "\n";
    for (std::size_t i = 0; i < c.commands.size(); ++i) {
      const auto& cmd = c.commands[i];
      std::cout << "  [" << i << "] " << iface::to_string(cmd.op) << " "
                << cmd.src1 << " "
                << (cmd.src2 == iface::kUnusedOperand ? std::string("-")
                                                       : std::to_string(cmd.src2))
                << " -> " << cmd.dst << "\n";
    }
    return bench::kExitOk;
  }

  if (bits == 0) bits = default_coefficient_bits(n);
  const RnsBase base = build_base(n, bits);
  const auto table = build_twiddles(base.modulus(0), n);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> polys(subpolys,
                                                std::vector<std::uint32_t>(n));
  for (auto& p : polys) {
    for (auto& v : p) {
      v = std::uniform_int_distribution<std::uint32_t>(
          0, base.modulus(0).value() - 1)(rng);
    }
  }
  std::vector<iface::Command> commands;
  for (std::uint32_t i = 0; i < subpolys; ++i) {
    commands.push_back(iface::Command::unary(iface::Opcode::kNttFwd, i, i));
  }
  const auto bytes = iface::encode_image(table, commands, polys);
  if (!out_path.empty()) {
    write_file(out_path, std::string(bytes.begin(), bytes.end()));
  }
  std::cout << iface::hex_dump(bytes);
  return bench::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rnspim: RNS polynomial arithmetic and PIM cost simulation"};
  app.require_subcommand(1);

  std::size_t n = 4096;
  unsigned bits = 0;

  auto* params = app.add_subcommand("params", "List the RNS base for n and bits");
  params->add_option("--n", n, "Polynomial length")->required();
  params->add_option("--bits", bits, "Coefficient bits (0: default for n)");

  bench::VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Run randomized self-checks");
  verify->add_option("--n", vopt.n, "Polynomial length");
  verify->add_option("--bits", vopt.bits, "Coefficient bits (0: default for n)");
  verify->add_option("--trials", vopt.trials, "Trials per suite");
  verify->add_option("--seed", vopt.seed, "Seed of the first trial");
  verify->add_flag("--corrupt-twiddle", vopt.corrupt_twiddle,
                   "Perturb one twiddle factor (debug)");

  ScenarioFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Simulate one scenario");
  add_scenario_flags(simulate, sim_flags);

  ScenarioFlags sweep_flags;
  std::string axis = "ciphertexts";
  std::string values;
  std::string csv_path;
  std::string svg_path;
  auto* sweep = app.add_subcommand("sweep", "Sweep one scenario parameter");
  add_scenario_flags(sweep, sweep_flags);
  sweep->add_option("--axis", axis, "ciphertexts, dpus or n")
      ->check(CLI::IsMember({"ciphertexts", "dpus", "n"}));
  sweep->add_option("--values", values, "Comma list of axis values");
  sweep->add_option("--csv", csv_path, "Write CSV here instead of stdout");
  sweep->add_option("--svg", svg_path, "Also write an SVG chart");

  std::uint32_t subpolys = 1;
  std::uint64_t image_seed = 1;
  std::string image_out;
  std::string image_decode;
  auto* image = app.add_subcommand("image", "Encode or decode an interface image");
  image->add_option("--n", n, "Polynomial length");
  image->add_option("--bits", bits, "Coefficient bits (0: default for n)");
  image->add_option("--subpolys", subpolys, "Random sub-polynomials to embed");
  image->add_option("--seed", image_seed, "Random seed");
  image->add_option("--out", image_out, "Write the encoded image here");
  image->add_option("--decode", image_decode, "Decode and summarize a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bench::kExitUsage;
  }

  try {
    if (params->parsed()) {
      if (!is_power_of_two(n)) {
        throw DomainError("n = " + std::to_string(n) + " is not a power of two");
      }
      std::cout << bench::format_params(n, bits);
      return bench::kExitOk;
    }
    if (verify->parsed()) {
      if (!is_power_of_two(vopt.n)) {
        throw DomainError("n = " + std::to_string(vopt.n) + " is not a power of two");
      }
      const auto result = bench::run_verify(vopt);
      for (const auto& line : result.lines) std::cout << line << "\n";
      return result.passed ? bench::kExitOk : bench::kExitVerifyFailed;
    }
    if (simulate->parsed()) {
      const auto scenario = make_scenario(sim_flags, simulate);
      const auto row = bench::run_point(scenario);
      std::cout << bench::to_csv({row});
      return row.error.empty() ? bench::kExitOk : bench::kExitPlanning;
    }
    if (sweep->parsed()) {
      const auto scenario = make_scenario(sweep_flags, sweep);
      const auto sweep_axis = bench::parse_axis(axis);
      const auto points = values.empty() ? bench::default_axis_values(sweep_axis)
                                         : parse_values(values);
      const auto rows = bench::run_sweep(scenario, sweep_axis, points);
      const auto csv = bench::to_csv(rows);
      if (csv_path.empty()) {
        std::cout << csv;
      } else {
        write_file(csv_path, csv);
      }
      if (!svg_path.empty()) write_file(svg_path, bench::to_svg(rows, sweep_axis));
      return bench::kExitOk;
    }
    if (image->parsed()) {
      return run_image(n, bits, subpolys, image_seed, image_out, image_decode);
    }
  } catch (const PlanningError& e) {
    std::cerr << "planning error: " << e.what() << "\n";
    return bench::kExitPlanning;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return bench::kExitPlanning;
  } catch (const ExhaustionError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return bench::kExitPlanning;
  } catch (const ParseError& e) {
    std::cerr << "image error: " << e.what() << "\n";
    return bench::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bench::kExitUsage;
  }
  return bench::kExitUsage;
}
