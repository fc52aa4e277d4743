// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/pimsim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "rnspim/errors.hpp"
#include "rnspim/pimiface.hpp"

namespace rnspim::pimsim {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

unsigned floor_log2(std::uint64_t x) {
  unsigned r = 0;
  while (x > 1) {
    x >>= 1;
    ++r;
  }
  return r;
}

unsigned stages_of(KernelKind kind, std::size_t n) {
  return kind == KernelKind::kNtt || kind == KernelKind::kIntt
             ? log2_exact(n)
             : 1;
}

// Bytes moved between MRAM and WRAM for one kernel instance.
std::uint64_t dma_bytes_per_item(KernelKind kind, std::size_t n,
                                 const DpuModel& model) {
  const std::uint64_t poly = 4 * static_cast<std::uint64_t>(n);
  switch (kind) {
    case KernelKind::kNtt:
    case KernelKind::kIntt: {
      // Each pass streams the sub-polynomial through a per-thread WRAM
      // buffer and applies as many stages as fit a buffer-sized block.
      const std::uint64_t buffer_elems =
          std::max<std::uint64_t>(2, model.wram_bytes / model.hw_threads / 4);
      const unsigned per_pass = std::max(1u, floor_log2(buffer_elems));
      const std::uint64_t passes = ceil_div(log2_exact(n), per_pass);
      return passes * 2 * poly + poly;  // + twiddle table
    }
    case KernelKind::kPointwiseMul:
    case KernelKind::kPointwiseAdd:
      return 3 * poly;
    case KernelKind::kBgvMul:
      return 7 * poly;
  }
  return 0;
}

bool needs_partner(const std::vector<KernelKind>& phases) {
  return std::any_of(phases.begin(), phases.end(), [](KernelKind k) {
    return k == KernelKind::kBgvMul || k == KernelKind::kPointwiseMul ||
           k == KernelKind::kPointwiseAdd;
  });
}

// Kernel instances a phase runs per resident ciphertext unit, and the
// number of resident polynomials per unit afterwards.
std::pair<std::uint64_t, std::uint64_t> phase_items(KernelKind kind,
                                                    std::uint64_t resident) {
  switch (kind) {
    case KernelKind::kNtt:
    case KernelKind::kIntt:
      return {resident, resident};
    case KernelKind::kBgvMul:
      return {1, 3};
    case KernelKind::kPointwiseMul:
    case KernelKind::kPointwiseAdd:
      return resident == 4 ? std::pair<std::uint64_t, std::uint64_t>{2, 2}
                           : std::pair<std::uint64_t, std::uint64_t>{resident,
                                                                     resident};
  }
  return {0, resident};
}

}  // namespace

void DpuModel::validate() const {
  if (mram_bytes == 0 || wram_bytes == 0 || hw_threads == 0 ||
      pipeline_saturation_threads == 0 || pipeline_stages == 0 ||
      clock_hz <= 0 || dma_max_transfer_bytes == 0) {
    throw ConfigError("DPU model parameters must be positive");
  }
  if (reserved_bytes >= mram_bytes) {
    throw ConfigError("reserved MRAM must be smaller than MRAM");
  }
  if (pipeline_saturation_threads > hw_threads) {
    throw ConfigError("pipeline saturation exceeds hardware threads");
  }
}

const char* to_string(MulRoutine routine) noexcept {
  switch (routine) {
    case MulRoutine::kCustom: return "custom";
    case MulRoutine::kNative: return "native";
    case MulRoutine::kDummy: return "dummy";
    case MulRoutine::kOptimistic: return "optimistic";
  }
  return "unknown";
}

CostTable CostTable::preset(std::string_view name) {
  CostTable t;
  if (name == "default") return t;
  if (name == "dummy") {
    t.routine = MulRoutine::kDummy;
  } else if (name == "optimistic") {
    t.routine = MulRoutine::kOptimistic;
  } else if (name == "native") {
    t.routine = MulRoutine::kNative;
  } else if (name == "native134") {
    t.routine = MulRoutine::kNative;
    t.mul64_native = 134 * t.mul8;
  } else {
    throw ConfigError("unknown cost preset '" + std::string(name) +
                      "' (expected default, dummy, optimistic, native, "
                      "native134)");
  }
  return t;
}

CostTable CostTable::all_ones() {
  CostTable t;
  t.add_sub_logic = t.mul8 = t.mul32_native_worst = t.mul64_native = 1;
  t.mul32x32_to_64_custom = t.mul32x32_to_32_custom = 1;
  t.dummy_mul32 = t.dummy_mul64 = t.optimistic_mul = 1;
  t.call_overhead = t.per_butterfly_overhead = t.barrier_cycles = 1;
  t.dma_setup_cycles = 1;
  t.dma_bytes_per_cycle = 1.0;
  return t;
}

void CostTable::validate() const {
  for (std::uint32_t v :
       {add_sub_logic, mul8, mul32_native_worst, mul64_native,
        mul32x32_to_64_custom, mul32x32_to_32_custom, dummy_mul32, dummy_mul64,
        optimistic_mul, call_overhead, per_butterfly_overhead, barrier_cycles,
        dma_setup_cycles}) {
    if (v == 0) throw ConfigError("cost table entries must be positive");
  }
  if (!(dma_bytes_per_cycle > 0)) {
    throw ConfigError("dma_bytes_per_cycle must be positive");
  }
}

std::uint64_t CostTable::wide_mul_cycles() const noexcept {
  switch (routine) {
    case MulRoutine::kCustom: return mul32x32_to_64_custom + call_overhead;
    case MulRoutine::kNative: return mul64_native + call_overhead;
    case MulRoutine::kDummy: return dummy_mul64 + call_overhead;
    case MulRoutine::kOptimistic: return optimistic_mul;  // inlined
  }
  return 0;
}

std::uint64_t CostTable::narrow_mul_cycles() const noexcept {
  switch (routine) {
    case MulRoutine::kCustom: return mul32x32_to_32_custom + call_overhead;
    case MulRoutine::kNative: return mul32_native_worst + call_overhead;
    case MulRoutine::kDummy: return dummy_mul32 + call_overhead;
    case MulRoutine::kOptimistic: return optimistic_mul;
  }
  return 0;
}

std::uint64_t CostTable::mod_mul_cycles() const noexcept {
  // a*b (wide), floor(v*R >> 64) (wide), q*p (low word only).
  return 2 * wide_mul_cycles() + narrow_mul_cycles() +
         std::uint64_t{kBarrettOps} * add_sub_logic;
}

std::uint64_t CostTable::mod_add_cycles() const noexcept {
  return std::uint64_t{kModAddOps} * add_sub_logic;
}

std::uint64_t CostTable::butterfly_cycles() const noexcept {
  return mod_mul_cycles() +
         std::uint64_t{kModAddOps + kModSubOps + kButterflyMemOps} *
             add_sub_logic +
         per_butterfly_overhead;
}

PlatformModel PlatformModel::with_dpus(std::uint32_t dpus) {
  PlatformModel p;
  p.ranks = static_cast<std::uint32_t>(ceil_div(dpus, p.dpus_per_rank));
  p.defective_dpus = p.ranks * p.dpus_per_rank - dpus;
  return p;
}

std::uint32_t PlatformModel::usable_in_rank(std::uint32_t rank) const noexcept {
  if (rank >= ranks) return 0;
  // Defects fill ranks from the last one backwards.
  const std::uint64_t from_end = ranks - 1 - rank;
  const std::uint64_t defects_before = from_end * dpus_per_rank;
  if (defective_dpus <= defects_before) return dpus_per_rank;
  const std::uint64_t here =
      std::min<std::uint64_t>(dpus_per_rank, defective_dpus - defects_before);
  return static_cast<std::uint32_t>(dpus_per_rank - here);
}

void PlatformModel::validate() const {
  if (dpus_per_rank == 0 || ranks == 0) {
    throw ConfigError("platform needs at least one rank of DPUs");
  }
  if (defective_dpus > ranks * dpus_per_rank) {
    throw ConfigError("more defective DPUs than DPUs");
  }
  if (!(host_link_bytes_per_second > 0) || !(retrieval_bytes_per_second > 0)) {
    throw ConfigError("host link rates must be positive");
  }
}

const char* to_string(Strategy strategy) noexcept {
  return strategy == Strategy::kModulusParallel ? "parallel" : "sequential";
}

const char* to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::kNtt: return "ntt";
    case KernelKind::kIntt: return "intt";
    case KernelKind::kPointwiseMul: return "mul";
    case KernelKind::kPointwiseAdd: return "add";
    case KernelKind::kBgvMul: return "bgv";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  for (KernelKind k : {KernelKind::kNtt, KernelKind::kIntt,
                       KernelKind::kPointwiseMul, KernelKind::kPointwiseAdd,
                       KernelKind::kBgvMul}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown kernel '" + std::string(name) +
                    "' (expected ntt, intt, mul, add, bgv)");
}

std::vector<KernelKind> parse_phases(std::string_view list) {
  std::vector<KernelKind> phases;
  while (!list.empty()) {
    const auto comma = list.find(',');
    auto token = list.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) phases.push_back(parse_kernel_kind(token));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return phases;
}

std::string phases_to_string(const std::vector<KernelKind>& phases) {
  std::string out;
  for (const auto k : phases) {
    if (!out.empty()) out += ',';
    out += to_string(k);
  }
  return out;
}

Threading default_threading(KernelKind kind) noexcept {
  return kind == KernelKind::kNtt || kind == KernelKind::kIntt
             ? Threading::kCoarseGrained
             : Threading::kFineGrained;
}

Threading WorkPlan::threading_for(KernelKind kind) const noexcept {
  return kind == KernelKind::kNtt || kind == KernelKind::kIntt
             ? ntt_threading
             : elementwise_threading;
}

WorkPlan plan_work(std::uint32_t num_ciphertexts, std::uint32_t num_moduli,
                   const PlatformModel& platform, Strategy strategy) {
  platform.validate();
  const std::uint32_t usable = platform.usable_dpus();
  if (usable == 0) throw PlanningError("platform has no usable DPU");
  if (num_moduli == 0) throw PlanningError("RNS base has no modulus");

  WorkPlan plan;
  plan.strategy = strategy;
  plan.num_ciphertexts = num_ciphertexts;
  plan.num_moduli = num_moduli;
  plan.num_dpus = usable;
  plan.assignment.resize(usable);

  auto assign_round_robin = [&](const DpuGroup& group, std::uint32_t modulus) {
    const auto size = static_cast<std::uint32_t>(group.dpus.size());
    for (std::uint32_t ct = 0; ct < num_ciphertexts; ++ct) {
      auto& items = plan.assignment[group.dpus[ct % size]];
      items.push_back({ct, modulus, 0});
      items.push_back({ct, modulus, 1});
    }
  };

  if (strategy == Strategy::kModulusSequential) {
    DpuGroup all;
    all.dpus.resize(usable);
    for (std::uint32_t d = 0; d < usable; ++d) all.dpus[d] = d;
    for (std::uint32_t m = 0; m < num_moduli; ++m) assign_round_robin(all, m);
    plan.groups.push_back(std::move(all));
    return plan;
  }

  if (usable < num_moduli) {
    throw PlanningError("modulus-parallel plan needs at least " +
                        std::to_string(num_moduli) + " DPUs, platform has " +
                        std::to_string(usable) +
                        "; use the modulus-sequential strategy");
  }

  // Prefer whole ranks per modulus; fall back to an even DPU split.
  std::vector<std::uint32_t> sizes;
  if (platform.ranks % num_moduli == 0) {
    const std::uint32_t ranks_per_group = platform.ranks / num_moduli;
    for (std::uint32_t g = 0; g < num_moduli; ++g) {
      std::uint32_t size = 0;
      for (std::uint32_t r = g * ranks_per_group; r < (g + 1) * ranks_per_group;
           ++r) {
        size += platform.usable_in_rank(r);
      }
      sizes.push_back(size);
    }
  }
  // Whole ranks only when defects leave the split as even as a DPU-level
  // one; a smaller smallest group would raise the makespan.
  if (sizes.empty() ||
      *std::min_element(sizes.begin(), sizes.end()) < usable / num_moduli) {
    sizes.assign(num_moduli, usable / num_moduli);
    for (std::uint32_t g = 0; g < usable % num_moduli; ++g) ++sizes[g];
  }

  std::uint32_t next = 0;
  for (std::uint32_t g = 0; g < num_moduli; ++g) {
    DpuGroup group;
    group.modulus = g;
    for (std::uint32_t i = 0; i < sizes[g]; ++i) group.dpus.push_back(next++);
    assign_round_robin(group, g);
    plan.groups.push_back(std::move(group));
  }
  plan.imbalanced =
      std::adjacent_find(sizes.begin(), sizes.end(), std::not_equal_to<>()) !=
      sizes.end();
  return plan;
}

std::uint64_t kernel_work_cycles(KernelKind kind, std::size_t n,
                                 const CostTable& cost) {
  const std::uint64_t len = n;
  const std::uint64_t butterflies = len / 2 * log2_exact(n);
  switch (kind) {
    case KernelKind::kNtt:
      return butterflies * cost.butterfly_cycles();
    case KernelKind::kIntt:
      // Final scaling by n^{-1}.
      return butterflies * cost.butterfly_cycles() + len * cost.mod_mul_cycles();
    case KernelKind::kPointwiseMul:
      return len * cost.mod_mul_cycles();
    case KernelKind::kPointwiseAdd:
      return len * cost.mod_add_cycles();
    case KernelKind::kBgvMul:
      return 4 * len * cost.mod_mul_cycles() + len * cost.mod_add_cycles();
  }
  return 0;
}

KernelCost kernel_cost(KernelKind kind, std::size_t n,
                       std::uint64_t items_on_dpu, Threading threading,
                       const CostTable& cost, const DpuModel& model) {
  if (!is_power_of_two(n)) {
    throw DomainError("kernel length " + std::to_string(n) +
                      " is not a power of two");
  }
  if (items_on_dpu == 0) return {};

  const std::uint64_t work = kernel_work_cycles(kind, n, cost);
  const std::uint64_t saturation = model.pipeline_saturation_threads;
  const std::uint64_t active =
      threading == Threading::kCoarseGrained
          ? std::min<std::uint64_t>(items_on_dpu, model.hw_threads)
          : model.hw_threads;
  const std::uint64_t parallelism = std::min(active, saturation);

  KernelCost out;
  out.compute_cycles =
      ceil_div(items_on_dpu * work * saturation, parallelism);
  if (threading == Threading::kFineGrained) {
    out.compute_cycles +=
        items_on_dpu * stages_of(kind, n) * std::uint64_t{cost.barrier_cycles};
  }

  const std::uint64_t bytes = dma_bytes_per_item(kind, n, model);
  const std::uint64_t chunk = std::max<std::uint64_t>(
      1, std::min(model.wram_bytes / model.hw_threads,
                  model.dma_max_transfer_bytes));
  const auto streaming = static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(bytes) / cost.dma_bytes_per_cycle));
  out.dma_cycles =
      items_on_dpu * (streaming + ceil_div(bytes, chunk) * cost.dma_setup_cycles);
  return out;
}

SimReport simulate(const WorkPlan& plan, const std::vector<KernelKind>& phases,
                   std::size_t n, const CostTable& cost, const DpuModel& model,
                   const PlatformModel& platform) {
  cost.validate();
  model.validate();
  platform.validate();
  if (!is_power_of_two(n)) {
    throw DomainError("polynomial length " + std::to_string(n) +
                      " is not a power of two");
  }
  if (plan.assignment.size() != plan.num_dpus ||
      plan.num_dpus > platform.usable_dpus()) {
    throw PlanningError("work plan does not match the platform");
  }

  SimReport report;
  report.strategy = plan.strategy;
  report.imbalanced = plan.imbalanced;
  report.per_butterfly_overhead = cost.per_butterfly_overhead;
  report.per_dpu_cycles.assign(plan.num_dpus, 0);

  // units[d][m]: ciphertexts DPU d holds under modulus m.
  std::vector<std::map<std::uint32_t, std::uint64_t>> units(plan.num_dpus);
  for (std::uint32_t d = 0; d < plan.num_dpus; ++d) {
    for (const auto& item : plan.assignment[d]) {
      if (item.role == 0) ++units[d][item.modulus];
    }
  }

  const std::uint64_t initial = needs_partner(phases) ? 4 : 2;
  std::uint64_t peak = initial;
  {
    std::uint64_t r = initial;
    for (const auto kind : phases) {
      r = phase_items(kind, r).second;
      peak = std::max(peak, r);
    }
  }
  const std::uint64_t cap = capacity(n, model);
  const std::uint64_t poly_bytes = 4 * static_cast<std::uint64_t>(n);

  std::uint64_t final_resident = initial;
  std::uint64_t commands = 0;
  for (const auto kind : phases) {
    PhaseCost phase{kind, 0};
    const Threading threading = plan.threading_for(kind);
    const std::uint64_t per_unit = phase_items(kind, final_resident).first;
    for (std::uint32_t d = 0; d < plan.num_dpus; ++d) {
      std::uint64_t cycles = 0;
      for (const auto& [modulus, count] : units[d]) {
        cycles += kernel_cost(kind, n, per_unit * count, threading, cost, model)
                      .total();
        commands += per_unit * count;
      }
      report.per_dpu_cycles[d] += cycles;
      phase.makespan_cycles = std::max(phase.makespan_cycles, cycles);
    }
    final_resident = phase_items(kind, final_resident).second;
    report.phases.push_back(phase);
  }

  for (std::uint32_t d = 0; d < plan.num_dpus; ++d) {
    if (units[d].empty()) continue;
    ++report.active_dpus;
    for (const auto& [modulus, count] : units[d]) {
      if (count * peak > cap) {
        throw CapacityError("DPU " + std::to_string(d) + " would hold " +
                            std::to_string(count * peak) +
                            " sub-polynomials; capacity(" + std::to_string(n) +
                            ") is " + std::to_string(cap));
      }
      // Header and twiddles per configured modulus, then operand data.
      report.bytes_to_dpus += iface::kHeaderBytes + 2 * poly_bytes +
                              count * initial * poly_bytes;
      report.bytes_from_dpus += count * final_resident * poly_bytes;
    }
  }
  report.bytes_to_dpus += commands * iface::kCommandBytes;

  report.makespan_cycles =
      report.per_dpu_cycles.empty()
          ? 0
          : *std::max_element(report.per_dpu_cycles.begin(),
                              report.per_dpu_cycles.end());
  report.compute_seconds =
      static_cast<double>(report.makespan_cycles) / model.clock_hz;
  report.transfer_seconds = static_cast<double>(report.bytes_to_dpus) /
                            platform.host_link_bytes_per_second;
  report.retrieval_seconds = static_cast<double>(report.bytes_from_dpus) /
                             platform.retrieval_bytes_per_second;
  return report;
}

std::uint64_t capacity(std::size_t n, const DpuModel& model) {
  if (!is_power_of_two(n)) {
    throw DomainError("polynomial length " + std::to_string(n) +
                      " is not a power of two");
  }
  const std::uint64_t poly_bytes = 4 * static_cast<std::uint64_t>(n);
  const std::uint64_t footprint = 2 * poly_bytes;
  const std::uint64_t usable = model.usable_mram_bytes();
  return usable <= footprint ? 0 : (usable - footprint) / poly_bytes;
}

SimConfig load_sim_config(const KeyValueConfig& config,
                          const std::vector<std::string>& extra_keys) {
  SimConfig out;
  if (const auto preset = config.get("preset")) {
    out.cost = CostTable::preset(*preset);
  }

  using U64Setter = std::function<void(std::uint64_t)>;
  using DoubleSetter = std::function<void(double)>;
  auto u32 = [](std::uint32_t& field) {
    return U64Setter([&field](std::uint64_t v) {
      if (v > 0xFFFFFFFFull) throw ConfigError("value exceeds 32 bits");
      field = static_cast<std::uint32_t>(v);
    });
  };
  auto u64 = [](std::uint64_t& field) {
    return U64Setter([&field](std::uint64_t v) { field = v; });
  };
  auto dbl = [](double& field) {
    return DoubleSetter([&field](double v) { field = v; });
  };

  std::map<std::string, U64Setter> ints = {
      {"mram_bytes", u64(out.dpu.mram_bytes)},
      {"reserved_bytes", u64(out.dpu.reserved_bytes)},
      {"wram_bytes", u64(out.dpu.wram_bytes)},
      {"hw_threads", u32(out.dpu.hw_threads)},
      {"pipeline_saturation_threads", u32(out.dpu.pipeline_saturation_threads)},
      {"pipeline_stages", u32(out.dpu.pipeline_stages)},
      {"dma_max_transfer_bytes", u64(out.dpu.dma_max_transfer_bytes)},
      {"add_sub_logic", u32(out.cost.add_sub_logic)},
      {"mul8", u32(out.cost.mul8)},
      {"mul32_native_worst", u32(out.cost.mul32_native_worst)},
      {"mul64_native", u32(out.cost.mul64_native)},
      {"mul32x32_to_64_custom", u32(out.cost.mul32x32_to_64_custom)},
      {"mul32x32_to_32_custom", u32(out.cost.mul32x32_to_32_custom)},
      {"dummy_mul32", u32(out.cost.dummy_mul32)},
      {"dummy_mul64", u32(out.cost.dummy_mul64)},
      {"optimistic_mul", u32(out.cost.optimistic_mul)},
      {"call_overhead", u32(out.cost.call_overhead)},
      {"per_butterfly_overhead", u32(out.cost.per_butterfly_overhead)},
      {"barrier_cycles", u32(out.cost.barrier_cycles)},
      {"dma_setup_cycles", u32(out.cost.dma_setup_cycles)},
      {"dpus_per_rank", u32(out.platform.dpus_per_rank)},
      {"ranks", u32(out.platform.ranks)},
      {"defective_dpus", u32(out.platform.defective_dpus)},
  };
  std::map<std::string, DoubleSetter> doubles = {
      {"clock_hz", dbl(out.dpu.clock_hz)},
      {"dma_bytes_per_cycle", dbl(out.cost.dma_bytes_per_cycle)},
      {"host_link_bytes_per_second",
       dbl(out.platform.host_link_bytes_per_second)},
      {"retrieval_bytes_per_second",
       dbl(out.platform.retrieval_bytes_per_second)},
  };

  std::set<std::string> allowed = {"preset", "routine"};
  for (const auto& [key, setter] : ints) allowed.insert(key);
  for (const auto& [key, setter] : doubles) allowed.insert(key);
  allowed.insert(extra_keys.begin(), extra_keys.end());
  config.require_known(allowed);

  for (const auto& [key, setter] : ints) {
    if (const auto v = config.get_u64(key)) setter(*v);
  }
  for (const auto& [key, setter] : doubles) {
    if (const auto v = config.get_double(key)) setter(*v);
  }
  if (const auto routine = config.get("routine")) {
    bool found = false;
    for (MulRoutine r : {MulRoutine::kCustom, MulRoutine::kNative,
                         MulRoutine::kDummy, MulRoutine::kOptimistic}) {
      if (*routine == to_string(r)) {
        out.cost.routine = r;
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown routine '" + *routine + "'");
  }
  out.dpu.validate();
  out.cost.validate();
  out.platform.validate();
  return out;
}

}  // namespace rnspim::pimsim
