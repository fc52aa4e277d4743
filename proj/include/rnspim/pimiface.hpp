// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Host <-> DPU interface image: one MRAM symbol holding a fixed header
// followed by main data (twiddles, commands, sub-polynomials).
//
// All integers are little-endian. Offsets count 4-byte DPU words from the
// start of main data, which begins right after the header, and must be
// even so every section starts 8-byte aligned. See docs/interface_format.md.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rnspim/ntt.hpp"
#include "rnspim/pimsim.hpp"

namespace rnspim::iface {

inline constexpr std::size_t kHeaderBytes = 80;
inline constexpr std::size_t kCommandBytes = 32;
inline constexpr std::uint32_t kVersion = 1;
// "DRMH" read as a little-endian u32.
inline constexpr std::uint32_t kMagic = 0x484D5244u;
// Marks an operand slot the opcode does not use.
inline constexpr std::uint64_t kUnusedOperand = ~std::uint64_t{0};

enum class Opcode : std::uint32_t {
  kNttFwd = 1,
  kNttInv = 2,
  kPointwiseMul = 3,
  kPointwiseAdd = 4,
  // src1, src1+1: first ciphertext; src2, src2+1: second;
  // dst, dst+1, dst+2: the three product polynomials.
  kBgvMul = 5,
};

const char* to_string(Opcode op) noexcept;
bool is_unary(Opcode op) noexcept;

struct Command {
  Opcode op = Opcode::kNttFwd;
  std::uint64_t src1 = kUnusedOperand;
  std::uint64_t src2 = kUnusedOperand;
  std::uint64_t dst = kUnusedOperand;

  static Command unary(Opcode op, std::uint64_t src, std::uint64_t dst) {
    return {op, src, kUnusedOperand, dst};
  }
  static Command binary(Opcode op, std::uint64_t a, std::uint64_t b,
                        std::uint64_t dst) {
    return {op, a, b, dst};
  }

  friend bool operator==(const Command&, const Command&) = default;
};

struct InterfaceHeader {
  std::uint32_t version = kVersion;
  std::uint64_t poly_len = 0;
  std::uint64_t modulus = 0;
  std::uint64_t n_inv = 0;
  std::uint64_t num_commands = 0;
  std::uint64_t offset_twiddles = 0;
  std::uint64_t offset_commands = 0;
  std::uint64_t offset_subpolys = 0;
  // Fields after this point extend the header behind the named ones.
  std::uint64_t barrett_factor = 0;
  std::uint64_t num_subpolys = 0;

  friend bool operator==(const InterfaceHeader&,
                         const InterfaceHeader&) = default;
};

// Requested word offsets; each must be even and leave room for the
// preceding section.
struct SectionOffsets {
  std::uint64_t twiddles = 0;
  std::uint64_t commands = 0;
  std::uint64_t subpolys = 0;
};

// Decoded image. `subpolys` is the flat region, num_subpolys * n words.
struct ImageContents {
  InterfaceHeader header;
  std::vector<std::uint32_t> forward;
  std::vector<std::uint32_t> inverse_scrambled;
  std::vector<Command> commands;
  std::vector<std::uint32_t> subpolys;

  std::span<const std::uint32_t> subpoly(std::size_t i) const;
  std::span<std::uint32_t> subpoly(std::size_t i);
  // Rebuilds the twiddle table the kernels consume.
  TwiddleTable twiddles() const;

  friend bool operator==(const ImageContents&, const ImageContents&) = default;
};

// Packed layout: twiddles at 0, commands right after, sub-polynomials last.
SectionOffsets packed_offsets(std::size_t n, std::size_t num_commands);

// Size in bytes of an image with the given header.
std::size_t image_size(const InterfaceHeader& header);

// Throws DomainError on inconsistent inputs or misaligned/overlapping
// offsets, CapacityError if the image exceeds the usable MRAM.
std::vector<std::uint8_t> encode_image(
    const TwiddleTable& twiddles, const std::vector<Command>& commands,
    const std::vector<std::vector<std::uint32_t>>& subpolys,
    const pimsim::DpuModel& model = {},
    std::optional<SectionOffsets> offsets = std::nullopt);

// Re-encodes decoded contents at their recorded offsets.
std::vector<std::uint8_t> encode_image(const ImageContents& contents,
                                       const pimsim::DpuModel& model = {});

// Throws ParseError; the kind names the violated rule.
ImageContents decode_image(std::span<const std::uint8_t> bytes);

// Applies every command in order to the sub-polynomial region. Throws
// ExecutionError naming the first command with an out-of-range operand.
void execute_contents(ImageContents& contents);
std::vector<std::uint8_t> execute_image(std::span<const std::uint8_t> bytes);

// 16 bytes per line, prefixed by the byte offset in hex.
std::string hex_dump(std::span<const std::uint8_t> bytes);

}  // namespace rnspim::iface
