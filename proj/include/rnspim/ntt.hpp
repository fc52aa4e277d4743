// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Negacyclic NTT over Z_p[x]/(x^n + 1).
//
// The forward transform uses Cooley-Tukey butterflies on natural-order
// input and leaves its output in bit-reversed order: slot j holds
// A(psi^(2 * bit_reverse(j) + 1)). The inverse uses Gentleman-Sande
// butterflies, consumes that order directly, and returns coefficients in
// natural order scaled by n^{-1}. No reordering pass runs in between, so
// pointwise products operate on bit-reversed slots.
//
// Both kernels read their twiddle tables strictly front to back.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rnspim/modarith.hpp"
#include "rnspim/polyring.hpp"

namespace rnspim {

// Reverses the low `width_bits` bits of `index`.
constexpr std::size_t bit_reverse(std::size_t index,
                                  unsigned width_bits) noexcept {
  std::size_t r = 0;
  for (unsigned b = 0; b < width_bits; ++b) {
    r = (r << 1) | (index & 1);
    index >>= 1;
  }
  return r;
}

struct TwiddleTable {
  std::size_t modulus_index = 0;
  ResidueModulus modulus;
  std::size_t n = 0;
  std::uint32_t psi = 0;
  // forward[k] = psi^bit_reverse(k, log2 n); entries 1..n-1 are read in
  // order by the forward kernel.
  std::vector<std::uint32_t> forward;
  // inverse_scrambled[1 + bit_reverse(i - 1, log2 n)] = psi^{-i} for
  // 1 <= i < n; entry 0 holds 1 and is never read.
  std::vector<std::uint32_t> inverse_scrambled;
  std::uint32_t n_inv = 0;

  // psi^0, psi^{-1}, ..., psi^{-(n-1)} recovered from the scrambled table.
  std::vector<std::uint32_t> inverse_logical() const;
};

// Throws DomainError unless n is a power of two >= 2 and p == 1 (mod 2n).
TwiddleTable build_twiddles(const ResidueModulus& m, std::size_t n,
                            std::size_t modulus_index = 0);

enum class Threading { kCoarseGrained, kFineGrained };

struct NttPlan {
  std::size_t n = 0;
  unsigned log2n = 0;
  unsigned stages = 0;
  Threading threading = Threading::kCoarseGrained;

  static NttPlan make(std::size_t n,
                      Threading threading = Threading::kCoarseGrained);
};

// In-place kernels on raw residue spans. The span length must equal
// table.n; values must be reduced modulo table.modulus.
void ntt_forward_inplace(std::span<std::uint32_t> a, const TwiddleTable& table);
void ntt_inverse_inplace(std::span<std::uint32_t> a, const TwiddleTable& table);

// Same kernels, additionally appending every twiddle-table index read.
void ntt_forward_traced(std::span<std::uint32_t> a, const TwiddleTable& table,
                        std::vector<std::size_t>& reads);
void ntt_inverse_traced(std::span<std::uint32_t> a, const TwiddleTable& table,
                        std::vector<std::size_t>& reads);

// Value-level transforms with domain and shape checks.
SubPolynomial ntt_forward(SubPolynomial sub, const TwiddleTable& table);
SubPolynomial ntt_inverse(SubPolynomial sub, const TwiddleTable& table);

// Twiddle tables for every modulus of a base at one polynomial length.
class NttContext {
 public:
  NttContext(std::shared_ptr<const RnsBase> base, std::size_t n);

  std::size_t n() const noexcept { return n_; }
  const RnsBase& base() const noexcept { return *base_; }
  const std::shared_ptr<const RnsBase>& shared_base() const noexcept {
    return base_;
  }
  const TwiddleTable& table(std::size_t i) const { return tables_.at(i); }

  RnsPolynomial forward(RnsPolynomial poly) const;
  RnsPolynomial inverse(RnsPolynomial poly) const;

 private:
  void check(const RnsPolynomial& poly, Domain expected) const;

  std::shared_ptr<const RnsBase> base_;
  std::size_t n_;
  std::vector<TwiddleTable> tables_;
};

}  // namespace rnspim
