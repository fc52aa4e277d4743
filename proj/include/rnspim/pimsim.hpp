// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Analytic cost model of an UPMEM-style PIM system.
//
// Kernel costs come from closed-form instruction counts weighted by a
// per-instruction-class cycle table. A DPU interleaves its threads in a
// revolver pipeline: one thread issues at most once per
// `pipeline_saturation_threads` cycles, so compute time for W cycles of
// per-thread work spread over T active threads is
//
//   ceil(W * saturation / min(T, saturation)).
//
// MRAM<->WRAM DMA is serialized per DPU (one thread at a time) and is
// added on top of compute without overlap.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rnspim/kvconfig.hpp"
#include "rnspim/ntt.hpp"

namespace rnspim::pimsim {

struct DpuModel {
  std::uint64_t mram_bytes = 64ull << 20;
  std::uint64_t reserved_bytes = 4ull << 20;
  std::uint64_t wram_bytes = 64ull << 10;
  std::uint32_t hw_threads = 16;
  std::uint32_t pipeline_saturation_threads = 11;
  std::uint32_t pipeline_stages = 14;
  double clock_hz = 400e6;
  // Largest single MRAM<->WRAM transfer.
  std::uint64_t dma_max_transfer_bytes = 2048;

  // Throws ConfigError on reserved >= mram, saturation > threads, or zeros.
  void validate() const;
  // Bytes of MRAM the host may fill.
  std::uint64_t usable_mram_bytes() const noexcept {
    return mram_bytes - reserved_bytes;
  }
};

enum class MulRoutine { kCustom, kNative, kDummy, kOptimistic };

const char* to_string(MulRoutine routine) noexcept;

// Cycles per instruction class. Multiplication routines other than the
// optimistic one are out-of-line calls and pay `call_overhead` each.
struct CostTable {
  std::uint32_t add_sub_logic = 1;
  std::uint32_t mul8 = 1;
  std::uint32_t mul32_native_worst = 43;
  std::uint32_t mul64_native = 60;
  std::uint32_t mul32x32_to_64_custom = 35;
  std::uint32_t mul32x32_to_32_custom = 21;
  std::uint32_t dummy_mul32 = 2;
  std::uint32_t dummy_mul64 = 4;
  std::uint32_t optimistic_mul = 1;
  std::uint32_t call_overhead = 5;
  // Loop control and address arithmetic per butterfly.
  std::uint32_t per_butterfly_overhead = 4;
  // Thread barrier per stage under fine-grained threading.
  std::uint32_t barrier_cycles = 32;
  std::uint32_t dma_setup_cycles = 77;
  double dma_bytes_per_cycle = 2.0;
  MulRoutine routine = MulRoutine::kCustom;

  // "default", "dummy", "optimistic", "native" or "native134". Throws
  // ConfigError for any other name.
  static CostTable preset(std::string_view name);
  // Every cycle entry 1, one byte per DMA cycle, one-cycle setup.
  static CostTable all_ones();

  void validate() const;

  // Cost of one 32x32 -> 64 and one 32x32 -> 32 multiplication under the
  // selected routine, including call overhead.
  std::uint64_t wide_mul_cycles() const noexcept;
  std::uint64_t narrow_mul_cycles() const noexcept;
  // Full modular multiplication: product, Barrett quotient, quotient * p.
  std::uint64_t mod_mul_cycles() const noexcept;
  std::uint64_t mod_add_cycles() const noexcept;
  std::uint64_t butterfly_cycles() const noexcept;
};

// Instruction counts of the modeled kernels.
inline constexpr std::uint32_t kModAddOps = 3;   // add, compare, conditional subtract
inline constexpr std::uint32_t kModSubOps = 3;
inline constexpr std::uint32_t kBarrettOps = 8;  // shifts, limb adds, two corrections
inline constexpr std::uint32_t kButterflyMemOps = 5;  // 3 WRAM loads, 2 stores

inline constexpr std::uint32_t kDpusPerRank = 64;

struct PlatformModel {
  std::uint32_t dpus_per_rank = kDpusPerRank;
  std::uint32_t ranks = 8;
  std::uint32_t defective_dpus = 3;
  // Host->DPU and DPU->host rates; calibration parameters.
  double host_link_bytes_per_second = 4.5e9;
  double retrieval_bytes_per_second = 1.8e9;

  // Enough ranks to hold `dpus`, with the remainder marked defective.
  static PlatformModel with_dpus(std::uint32_t dpus);

  std::uint32_t usable_dpus() const noexcept {
    return ranks * dpus_per_rank - defective_dpus;
  }
  // Defects are taken from the highest ranks first.
  std::uint32_t usable_in_rank(std::uint32_t rank) const noexcept;
  void validate() const;
};

enum class Strategy { kModulusParallel, kModulusSequential };

const char* to_string(Strategy strategy) noexcept;

enum class KernelKind { kNtt, kIntt, kPointwiseMul, kPointwiseAdd, kBgvMul };

const char* to_string(KernelKind kind) noexcept;
// Accepts "ntt", "intt", "mul", "add", "bgv". Throws ConfigError otherwise.
KernelKind parse_kernel_kind(std::string_view name);
// Comma-separated list; empty string gives an empty list.
std::vector<KernelKind> parse_phases(std::string_view list);
std::string phases_to_string(const std::vector<KernelKind>& phases);

// Element-wise kernels use fine-grained threading, transforms coarse.
Threading default_threading(KernelKind kind) noexcept;

struct WorkItem {
  std::uint32_t ciphertext = 0;
  std::uint32_t modulus = 0;
  // Which polynomial of the ciphertext (0 or 1).
  std::uint32_t role = 0;

  friend bool operator==(const WorkItem&, const WorkItem&) = default;
};

struct DpuGroup {
  std::uint32_t modulus = 0;  // unused under ModulusSequential
  std::vector<std::uint32_t> dpus;
};

struct WorkPlan {
  Strategy strategy = Strategy::kModulusParallel;
  std::uint32_t num_ciphertexts = 0;
  std::uint32_t num_moduli = 0;
  std::uint32_t num_dpus = 0;
  // ModulusParallel: one group per modulus. ModulusSequential: one group
  // holding every DPU, reused for each modulus in turn.
  std::vector<DpuGroup> groups;
  // assignment[d] lists the items DPU d processes.
  std::vector<std::vector<WorkItem>> assignment;
  bool imbalanced = false;
  Threading ntt_threading = Threading::kCoarseGrained;
  Threading elementwise_threading = Threading::kFineGrained;

  Threading threading_for(KernelKind kind) const noexcept;
};

// Throws PlanningError when ModulusParallel has fewer DPUs than moduli or
// the platform has no usable DPU.
WorkPlan plan_work(std::uint32_t num_ciphertexts, std::uint32_t num_moduli,
                   const PlatformModel& platform, Strategy strategy);

struct KernelCost {
  std::uint64_t compute_cycles = 0;
  std::uint64_t dma_cycles = 0;

  std::uint64_t total() const noexcept { return compute_cycles + dma_cycles; }
};

// Per-item work in cycles of a single thread, excluding DMA and barriers.
std::uint64_t kernel_work_cycles(KernelKind kind, std::size_t n,
                                 const CostTable& cost);

// Cycles for `items_on_dpu` independent kernel instances on one DPU.
KernelCost kernel_cost(KernelKind kind, std::size_t n,
                       std::uint64_t items_on_dpu, Threading threading,
                       const CostTable& cost, const DpuModel& model);

struct PhaseCost {
  KernelKind kind;
  std::uint64_t makespan_cycles = 0;
};

struct SimReport {
  Strategy strategy = Strategy::kModulusParallel;
  std::vector<std::uint64_t> per_dpu_cycles;
  std::uint64_t makespan_cycles = 0;
  double compute_seconds = 0;
  double transfer_seconds = 0;
  double retrieval_seconds = 0;
  std::uint64_t bytes_to_dpus = 0;
  std::uint64_t bytes_from_dpus = 0;
  std::vector<PhaseCost> phases;
  std::uint32_t active_dpus = 0;
  bool imbalanced = false;
  std::uint32_t per_butterfly_overhead = 0;

  double total_seconds() const noexcept {
    return compute_seconds + transfer_seconds + retrieval_seconds;
  }
};

// Accumulates kernel costs per DPU over the planned items and phases.
// Throws CapacityError if a DPU's resident sub-polynomials exceed
// capacity(n).
SimReport simulate(const WorkPlan& plan, const std::vector<KernelKind>& phases,
                   std::size_t n, const CostTable& cost, const DpuModel& model,
                   const PlatformModel& platform);

// Sub-polynomials of length n that fit one DPU next to the twiddle and
// header footprint (two sub-polynomials' worth).
std::uint64_t capacity(std::size_t n, const DpuModel& model);

struct SimConfig {
  DpuModel dpu;
  CostTable cost;
  PlatformModel platform;
};

// Config keys are the field names of DpuModel, CostTable and PlatformModel,
// plus "preset" (applied first) and "routine". Unknown keys are rejected
// unless listed in `extra_keys`.
SimConfig load_sim_config(const KeyValueConfig& config,
                          const std::vector<std::string>& extra_keys = {});

}  // namespace rnspim::pimsim
