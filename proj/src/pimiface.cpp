// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/pimiface.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "rnspim/errors.hpp"

namespace rnspim {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kTruncated: return "truncated";
    case ParseErrorKind::kBadMagic: return "bad magic";
    case ParseErrorKind::kBadVersion: return "bad version";
    case ParseErrorKind::kBadHeader: return "bad header";
    case ParseErrorKind::kMisalignedOffset: return "misaligned offset";
    case ParseErrorKind::kNonMonotoneOffsets: return "non-monotone offsets";
    case ParseErrorKind::kOffsetOutOfRange: return "offset out of range";
    case ParseErrorKind::kBadOpcode: return "bad opcode";
    case ParseErrorKind::kResidueOutOfRange: return "residue out of range";
    case ParseErrorKind::kBadTwiddles: return "bad twiddles";
    case ParseErrorKind::kNonZeroPadding: return "non-zero padding";
  }
  return "unknown";
}

namespace iface {

namespace {

constexpr std::uint64_t kCommandWords = kCommandBytes / 4;
// Largest n a 32-bit prime can support (p == 1 mod 2n, p < 2^32).
constexpr std::uint64_t kMaxPolyLen = std::uint64_t{1} << 30;

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void put_u32(std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  void put_u64(std::size_t at, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  }

 private:
  std::vector<std::uint8_t>& out_;
};

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[at + i];
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[at + i];
  return v;
}

std::size_t word_to_byte(std::uint64_t word) { return kHeaderBytes + 4 * word; }

bool valid_opcode(std::uint32_t raw) { return raw >= 1 && raw <= 5; }

void check_layout(std::uint64_t n, std::uint64_t commands, const SectionOffsets& o) {
  if (o.twiddles % 2 || o.commands % 2 || o.subpolys % 2) {
    throw DomainError("section offsets must be even word counts (8-byte aligned)");
  }
  if (o.twiddles + 2 * n > o.commands ||
      o.commands + kCommandWords * commands > o.subpolys) {
    throw DomainError("section offsets overlap or are out of order");
  }
}

void write_image(std::vector<std::uint8_t>& out, const InterfaceHeader& h,
                 std::span<const std::uint32_t> forward,
                 std::span<const std::uint32_t> inverse,
                 const std::vector<Command>& commands,
                 std::span<const std::uint32_t> subpolys) {
  out.assign(image_size(h), 0);
  Writer w(out);
  w.put_u32(0, kMagic);
  w.put_u32(4, h.version);
  w.put_u64(8, h.poly_len);
  w.put_u64(16, h.modulus);
  w.put_u64(24, h.n_inv);
  w.put_u64(32, h.num_commands);
  w.put_u64(40, h.offset_twiddles);
  w.put_u64(48, h.offset_commands);
  w.put_u64(56, h.offset_subpolys);
  w.put_u64(64, h.barrett_factor);
  w.put_u64(72, h.num_subpolys);

  std::size_t at = word_to_byte(h.offset_twiddles);
  for (auto v : forward) { w.put_u32(at, v); at += 4; }
  for (auto v : inverse) { w.put_u32(at, v); at += 4; }
  at = word_to_byte(h.offset_commands);
  for (const auto& c : commands) {
    w.put_u32(at, static_cast<std::uint32_t>(c.op));
    w.put_u64(at + 8, c.src1);
    w.put_u64(at + 16, c.src2);
    w.put_u64(at + 24, c.dst);
    at += kCommandBytes;
  }
  at = word_to_byte(h.offset_subpolys);
  for (auto v : subpolys) { w.put_u32(at, v); at += 4; }
}

void check_capacity(std::size_t bytes, std::uint64_t n,
                    const pimsim::DpuModel& model) {
  if (bytes > model.usable_mram_bytes()) {
    throw CapacityError(
        "image of " + std::to_string(bytes) + " bytes exceeds the " +
        std::to_string(model.usable_mram_bytes()) +
        " usable MRAM bytes; capacity(" + std::to_string(n) + ") = " +
        std::to_string(pimsim::capacity(n, model)) + " sub-polynomials");
  }
}

[[noreturn]] void fail(ParseErrorKind kind, const std::string& what) {
  throw ParseError(kind, what);
}

void check_zero(std::span<const std::uint8_t> b, std::size_t from,
                std::size_t to, const char* where) {
  for (std::size_t i = from; i < to; ++i) {
    if (b[i] != 0) {
      fail(ParseErrorKind::kNonZeroPadding,
           std::string(where) + " byte " + std::to_string(i) + " is not zero");
    }
  }
}

void check_twiddles(const ImageContents& c) {
  const std::uint64_t n = c.header.poly_len;
  const ResidueModulus m(static_cast<std::uint32_t>(c.header.modulus), 2 * n);
  const unsigned width = log2_exact(n);
  const std::uint32_t psi = c.forward[n / 2];
  if (c.forward[0] != 1 || mod_pow(psi, n, m) != m.value() - 1) {
    fail(ParseErrorKind::kBadTwiddles,
         "forward table is not built from a primitive 2n-th root");
  }
  std::vector<std::uint32_t> powers(n);
  powers[0] = 1;
  for (std::size_t i = 1; i < n; ++i) powers[i] = mod_mul(powers[i - 1], psi, m);
  for (std::size_t k = 0; k < n; ++k) {
    if (c.forward[k] != powers[bit_reverse(k, width)]) {
      fail(ParseErrorKind::kBadTwiddles,
           "forward entry " + std::to_string(k) + " is not psi^bitrev(k)");
    }
  }
  const std::uint32_t psi_inv = mod_inverse(psi, m);
  std::uint32_t expected = 1;
  if (c.inverse_scrambled[0] != 1) {
    fail(ParseErrorKind::kBadTwiddles, "inverse entry 0 is not 1");
  }
  for (std::size_t i = 1; i < n; ++i) {
    expected = mod_mul(expected, psi_inv, m);
    const std::size_t slot = 1 + bit_reverse(i - 1, width);
    if (c.inverse_scrambled[slot] != expected) {
      fail(ParseErrorKind::kBadTwiddles,
           "inverse entry " + std::to_string(slot) + " is not psi^-" +
               std::to_string(i));
    }
  }
}

}  // namespace

const char* to_string(Opcode op) noexcept {
  switch (op) {
    case Opcode::kNttFwd: return "ntt_fwd";
    case Opcode::kNttInv: return "ntt_inv";
    case Opcode::kPointwiseMul: return "pointwise_mul";
    case Opcode::kPointwiseAdd: return "pointwise_add";
    case Opcode::kBgvMul: return "bgv_mul";
  }
  return "unknown";
}

bool is_unary(Opcode op) noexcept {
  return op == Opcode::kNttFwd || op == Opcode::kNttInv;
}

std::span<const std::uint32_t> ImageContents::subpoly(std::size_t i) const {
  const std::size_t n = header.poly_len;
  return std::span<const std::uint32_t>(subpolys).subspan(i * n, n);
}

std::span<std::uint32_t> ImageContents::subpoly(std::size_t i) {
  const std::size_t n = header.poly_len;
  return std::span<std::uint32_t>(subpolys).subspan(i * n, n);
}

TwiddleTable ImageContents::twiddles() const {
  const std::size_t n = header.poly_len;
  return TwiddleTable{0,
                      ResidueModulus(static_cast<std::uint32_t>(header.modulus),
                                     2 * static_cast<std::uint64_t>(n)),
                      n,
                      forward.at(n / 2),
                      forward,
                      inverse_scrambled,
                      static_cast<std::uint32_t>(header.n_inv)};
}

SectionOffsets packed_offsets(std::size_t n, std::size_t num_commands) {
  SectionOffsets o;
  o.twiddles = 0;
  o.commands = 2 * static_cast<std::uint64_t>(n);
  o.subpolys = o.commands + kCommandWords * num_commands;
  return o;
}

std::size_t image_size(const InterfaceHeader& h) {
  const std::uint64_t end_words =
      std::max({h.offset_twiddles + 2 * h.poly_len,
                h.offset_commands + kCommandWords * h.num_commands,
                h.offset_subpolys + h.poly_len * h.num_subpolys});
  const std::uint64_t bytes = word_to_byte(end_words);
  return static_cast<std::size_t>((bytes + 7) / 8 * 8);
}

std::vector<std::uint8_t> encode_image(
    const TwiddleTable& twiddles, const std::vector<Command>& commands,
    const std::vector<std::vector<std::uint32_t>>& subpolys,
    const pimsim::DpuModel& model, std::optional<SectionOffsets> offsets) {
  const std::uint64_t n = twiddles.n;
  if (!is_power_of_two(n) || n < 2 || twiddles.forward.size() != n ||
      twiddles.inverse_scrambled.size() != n) {
    throw DomainError("twiddle table does not match its length");
  }
  const SectionOffsets o = offsets.value_or(packed_offsets(n, commands.size()));
  check_layout(n, commands.size(), o);

  const std::uint32_t p = twiddles.modulus.value();
  std::vector<std::uint32_t> flat;
  flat.reserve(subpolys.size() * n);
  for (std::size_t i = 0; i < subpolys.size(); ++i) {
    if (subpolys[i].size() != n) {
      throw DomainError("sub-polynomial " + std::to_string(i) + " has length " +
                        std::to_string(subpolys[i].size()) + ", expected " +
                        std::to_string(n));
    }
    for (auto v : subpolys[i]) {
      if (v >= p) {
        throw DomainError("sub-polynomial " + std::to_string(i) +
                          " holds an unreduced residue");
      }
    }
    flat.insert(flat.end(), subpolys[i].begin(), subpolys[i].end());
  }
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto& c = commands[i];
    if (!valid_opcode(static_cast<std::uint32_t>(c.op)) ||
        (is_unary(c.op) && c.src2 != kUnusedOperand)) {
      throw DomainError("command " + std::to_string(i) + " is malformed");
    }
  }

  ImageContents contents;
  contents.header.poly_len = n;
  contents.header.modulus = p;
  contents.header.n_inv = twiddles.n_inv;
  contents.header.num_commands = commands.size();
  contents.header.offset_twiddles = o.twiddles;
  contents.header.offset_commands = o.commands;
  contents.header.offset_subpolys = o.subpolys;
  contents.header.barrett_factor = twiddles.modulus.barrett_factor();
  contents.header.num_subpolys = subpolys.size();

  check_capacity(image_size(contents.header), n, model);
  std::vector<std::uint8_t> out;
  write_image(out, contents.header, twiddles.forward,
              twiddles.inverse_scrambled, commands, flat);
  return out;
}

std::vector<std::uint8_t> encode_image(const ImageContents& c,
                                       const pimsim::DpuModel& model) {
  const auto& h = c.header;
  if (c.forward.size() != h.poly_len || c.inverse_scrambled.size() != h.poly_len ||
      c.commands.size() != h.num_commands ||
      c.subpolys.size() != h.poly_len * h.num_subpolys) {
    throw DomainError("image contents disagree with their header");
  }
  check_layout(h.poly_len, h.num_commands,
               {h.offset_twiddles, h.offset_commands, h.offset_subpolys});
  check_capacity(image_size(h), h.poly_len, model);
  std::vector<std::uint8_t> out;
  write_image(out, h, c.forward, c.inverse_scrambled, c.commands, c.subpolys);
  return out;
}

ImageContents decode_image(std::span<const std::uint8_t> b) {
  using K = ParseErrorKind;
  if (b.size() < kHeaderBytes) {
    fail(K::kTruncated, std::to_string(b.size()) + " bytes, header needs " +
                            std::to_string(kHeaderBytes));
  }
  if (get_u32(b, 0) != kMagic) fail(K::kBadMagic, "expected \"DRMH\"");

  ImageContents c;
  auto& h = c.header;
  h.version = get_u32(b, 4);
  if (h.version != kVersion) {
    fail(K::kBadVersion, "version " + std::to_string(h.version) +
                             ", supported " + std::to_string(kVersion));
  }
  h.poly_len = get_u64(b, 8);
  h.modulus = get_u64(b, 16);
  h.n_inv = get_u64(b, 24);
  h.num_commands = get_u64(b, 32);
  h.offset_twiddles = get_u64(b, 40);
  h.offset_commands = get_u64(b, 48);
  h.offset_subpolys = get_u64(b, 56);
  h.barrett_factor = get_u64(b, 64);
  h.num_subpolys = get_u64(b, 72);

  const std::uint64_t n = h.poly_len;
  if (!is_power_of_two(n) || n < 2 || n > kMaxPolyLen) {
    fail(K::kBadHeader, "poly_len " + std::to_string(n) +
                            " is not a power of two in [2, 2^30]");
  }
  if (h.modulus > 0xFFFFFFFFull || h.modulus < 3 ||
      !is_prime_u32(static_cast<std::uint32_t>(h.modulus)) ||
      (h.modulus - 1) % (2 * n) != 0) {
    fail(K::kBadHeader, "modulus " + std::to_string(h.modulus) +
                            " is not a prime == 1 (mod 2n)");
  }
  const ResidueModulus m(static_cast<std::uint32_t>(h.modulus), 2 * n);
  if (h.n_inv >= h.modulus ||
      mod_mul(static_cast<std::uint32_t>(h.n_inv),
              static_cast<std::uint32_t>(n % h.modulus), m) != 1) {
    fail(K::kBadHeader, "n_inv is not the inverse of poly_len");
  }
  if (h.barrett_factor != m.barrett_factor()) {
    fail(K::kBadHeader, "barrett_factor is not floor(2^64 / p)");
  }

  if (h.offset_twiddles % 2 || h.offset_commands % 2 || h.offset_subpolys % 2) {
    fail(K::kMisalignedOffset, "section offsets must be even word counts");
  }
  // Word limit of the buffer bounds every section; checking against it
  // first keeps the arithmetic below from overflowing.
  const std::uint64_t buffer_words = (b.size() - kHeaderBytes) / 4;
  auto check_section = [&](const char* name, std::uint64_t offset,
                           std::uint64_t count, std::uint64_t words_each) {
    if (offset > buffer_words || count > buffer_words ||
        (words_each != 0 && count > (buffer_words - offset) / words_each)) {
      fail(K::kOffsetOutOfRange,
           std::string(name) + " section extends past the " +
               std::to_string(b.size()) + "-byte buffer");
    }
  };
  check_section("twiddle", h.offset_twiddles, 2, n);
  check_section("command", h.offset_commands, h.num_commands, kCommandWords);
  check_section("sub-polynomial", h.offset_subpolys, h.num_subpolys, n);
  if (h.offset_twiddles + 2 * n > h.offset_commands ||
      h.offset_commands + kCommandWords * h.num_commands > h.offset_subpolys) {
    fail(K::kNonMonotoneOffsets,
         "sections must appear as twiddles, commands, sub-polynomials "
         "without overlap");
  }
  const std::size_t expected = image_size(h);
  if (expected != b.size()) {
    fail(K::kOffsetOutOfRange, "image ends at byte " + std::to_string(expected) +
                                   " but buffer holds " +
                                   std::to_string(b.size()));
  }

  // Gaps between sections and the tail padding.
  const std::size_t tw_end = word_to_byte(h.offset_twiddles + 2 * n);
  const std::size_t cmd_begin = word_to_byte(h.offset_commands);
  const std::size_t cmd_end = cmd_begin + kCommandBytes * h.num_commands;
  const std::size_t sub_begin = word_to_byte(h.offset_subpolys);
  const std::size_t sub_end = sub_begin + 4 * n * h.num_subpolys;
  check_zero(b, kHeaderBytes, word_to_byte(h.offset_twiddles), "gap");
  check_zero(b, tw_end, cmd_begin, "gap");
  check_zero(b, cmd_end, sub_begin, "gap");
  check_zero(b, sub_end, b.size(), "tail");

  std::size_t at = word_to_byte(h.offset_twiddles);
  c.forward.resize(n);
  c.inverse_scrambled.resize(n);
  for (auto* table : {&c.forward, &c.inverse_scrambled}) {
    for (auto& v : *table) {
      v = get_u32(b, at);
      at += 4;
      if (v >= h.modulus) fail(K::kResidueOutOfRange, "twiddle not below p");
    }
  }
  check_twiddles(c);

  c.commands.resize(h.num_commands);
  at = cmd_begin;
  for (std::size_t i = 0; i < c.commands.size(); ++i, at += kCommandBytes) {
    const std::uint32_t raw = get_u32(b, at);
    if (!valid_opcode(raw)) {
      fail(K::kBadOpcode, "command " + std::to_string(i) + " has opcode " +
                              std::to_string(raw));
    }
    check_zero(b, at + 4, at + 8, "command padding");
    auto& cmd = c.commands[i];
    cmd.op = static_cast<Opcode>(raw);
    cmd.src1 = get_u64(b, at + 8);
    cmd.src2 = get_u64(b, at + 16);
    cmd.dst = get_u64(b, at + 24);
    if (is_unary(cmd.op) && cmd.src2 != kUnusedOperand) {
      fail(K::kBadOpcode, "command " + std::to_string(i) +
                              " is unary but names a second source");
    }
  }

  c.subpolys.resize(n * h.num_subpolys);
  at = sub_begin;
  for (auto& v : c.subpolys) {
    v = get_u32(b, at);
    at += 4;
    if (v >= h.modulus) {
      fail(K::kResidueOutOfRange,
           "sub-polynomial residue at byte " + std::to_string(at - 4) +
               " is not below p");
    }
  }
  return c;
}

void execute_contents(ImageContents& c) {
  const std::size_t n = c.header.poly_len;
  const std::uint64_t count = c.header.num_subpolys;
  const TwiddleTable table = c.twiddles();
  const ResidueModulus& m = table.modulus;

  auto need = [&](std::size_t index, std::uint64_t first, std::uint64_t span,
                  const char* slot) {
    if (first == kUnusedOperand || first >= count || span > count - first) {
      throw ExecutionError(index, std::string(slot) + " operand " +
                                      std::to_string(first) + " outside the " +
                                      std::to_string(count) +
                                      " sub-polynomials");
    }
  };
  auto copy = [&](std::uint64_t i) {
    const auto s = c.subpoly(i);
    return std::vector<std::uint32_t>(s.begin(), s.end());
  };
  auto store = [&](std::uint64_t i, const std::vector<std::uint32_t>& v) {
    std::copy(v.begin(), v.end(), c.subpoly(i).begin());
  };

  for (std::size_t i = 0; i < c.commands.size(); ++i) {
    const Command& cmd = c.commands[i];
    switch (cmd.op) {
      case Opcode::kNttFwd:
      case Opcode::kNttInv: {
        need(i, cmd.src1, 1, "src1");
        need(i, cmd.dst, 1, "dst");
        auto v = copy(cmd.src1);
        if (cmd.op == Opcode::kNttFwd) {
          ntt_forward_inplace(v, table);
        } else {
          ntt_inverse_inplace(v, table);
        }
        store(cmd.dst, v);
        break;
      }
      case Opcode::kPointwiseMul:
      case Opcode::kPointwiseAdd: {
        need(i, cmd.src1, 1, "src1");
        need(i, cmd.src2, 1, "src2");
        need(i, cmd.dst, 1, "dst");
        auto a = copy(cmd.src1);
        const auto b = c.subpoly(cmd.src2);
        for (std::size_t j = 0; j < n; ++j) {
          a[j] = cmd.op == Opcode::kPointwiseMul ? mod_mul(a[j], b[j], m)
                                                 : mod_add(a[j], b[j], m);
        }
        store(cmd.dst, a);
        break;
      }
      case Opcode::kBgvMul: {
        need(i, cmd.src1, 2, "src1");
        need(i, cmd.src2, 2, "src2");
        need(i, cmd.dst, 3, "dst");
        const auto a0 = copy(cmd.src1), a1 = copy(cmd.src1 + 1);
        const auto b0 = copy(cmd.src2), b1 = copy(cmd.src2 + 1);
        std::vector<std::uint32_t> d0(n), d1(n), d2(n);
        for (std::size_t j = 0; j < n; ++j) {
          d0[j] = mod_mul(a0[j], b0[j], m);
          d1[j] = mod_add(mod_mul(a0[j], b1[j], m), mod_mul(a1[j], b0[j], m), m);
          d2[j] = mod_mul(a1[j], b1[j], m);
        }
        store(cmd.dst, d0);
        store(cmd.dst + 1, d1);
        store(cmd.dst + 2, d2);
        break;
      }
    }
  }
}

std::vector<std::uint8_t> execute_image(std::span<const std::uint8_t> bytes) {
  ImageContents c = decode_image(bytes);
  execute_contents(c);
  std::vector<std::uint8_t> out;
  write_image(out, c.header, c.forward, c.inverse_scrambled, c.commands,
              c.subpolys);
  return out;
}

std::string hex_dump(std::span<const std::uint8_t> bytes) {
  std::string out;
  char buf[8];
  for (std::size_t line = 0; line < bytes.size(); line += 16) {
    char off[16];
    std::snprintf(off, sizeof off, "%08zx ", line);
    out += off;
    for (std::size_t i = line; i < std::min(line + 16, bytes.size()); ++i) {
      std::snprintf(buf, sizeof buf, " %02x", bytes[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace iface
}  // namespace rnspim
