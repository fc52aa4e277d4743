// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Scalar arithmetic modulo 32-bit NTT-friendly primes.
//
// Multiplication follows the DPU recipe: a 32x32 -> 64 product assembled
// from four 16x16 partial products, then Barrett reduction with a 64-bit
// shift. Everything here is functionally exact; cycle costs live in pimsim.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rnspim {

// One RNS modulus p with its Barrett factor floor(2^64 / p) and the
// negacyclic order 2n it supports (p == 1 mod 2n).
class ResidueModulus {
 public:
  // Throws DomainError unless p is prime, p >= 3, two_n is a power of two
  // and p == 1 (mod two_n).
  ResidueModulus(std::uint32_t p, std::uint64_t two_n);

  std::uint32_t value() const noexcept { return p_; }
  std::uint64_t barrett_factor() const noexcept { return barrett_; }
  std::uint64_t two_n() const noexcept { return two_n_; }

  friend bool operator==(const ResidueModulus&,
                         const ResidueModulus&) = default;

 private:
  std::uint32_t p_;
  std::uint64_t barrett_;
  std::uint64_t two_n_;
};

// Result of a 32x32-bit multiplication, split into two 32-bit limbs.
struct WideProduct {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  constexpr std::uint64_t value() const noexcept {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }
  friend constexpr bool operator==(const WideProduct&,
                                   const WideProduct&) = default;
};

// Schoolbook 32x32 -> 64 product from four 16x16 partial products:
// hi << 32 + (m1 + m2) << 16 + lo.
constexpr WideProduct wide_mul_32x32(std::uint32_t a, std::uint32_t b) noexcept {
  const std::uint32_t a0 = a & 0xFFFFu;
  const std::uint32_t a1 = a >> 16;
  const std::uint32_t b0 = b & 0xFFFFu;
  const std::uint32_t b1 = b >> 16;

  const std::uint32_t lo = a0 * b0;
  const std::uint32_t m1 = a0 * b1;
  const std::uint32_t m2 = a1 * b0;
  const std::uint32_t hi = a1 * b1;

  // m1 + m2 can carry into bit 32.
  const std::uint64_t mid = static_cast<std::uint64_t>(m1) + m2;
  const std::uint64_t combined = (static_cast<std::uint64_t>(hi) << 32) +
                                 (mid << 16) + static_cast<std::uint64_t>(lo);
  return WideProduct{static_cast<std::uint32_t>(combined),
                     static_cast<std::uint32_t>(combined >> 32)};
}

// High 64 bits of a 64x64 product, built from four wide_mul_32x32 calls.
constexpr std::uint64_t mul_hi_64(std::uint64_t a, std::uint64_t b) noexcept {
  const auto al = static_cast<std::uint32_t>(a);
  const auto ah = static_cast<std::uint32_t>(a >> 32);
  const auto bl = static_cast<std::uint32_t>(b);
  const auto bh = static_cast<std::uint32_t>(b >> 32);

  const std::uint64_t ll = wide_mul_32x32(al, bl).value();
  const std::uint64_t lh = wide_mul_32x32(al, bh).value();
  const std::uint64_t hl = wide_mul_32x32(ah, bl).value();
  const std::uint64_t hh = wide_mul_32x32(ah, bh).value();

  const std::uint64_t mid =
      (ll >> 32) + (lh & 0xFFFFFFFFu) + (hl & 0xFFFFFFFFu);
  return hh + (lh >> 32) + (hl >> 32) + (mid >> 32);
}

// v mod p as v - p * ((v * R) >> 64), then at most two conditional
// subtractions. Callers pass products of reduced residues (v < p^2), but
// the quotient estimate is short by less than 2 for any 64-bit v, so the
// result is exact over the whole range.
inline std::uint32_t barrett_reduce(std::uint64_t v,
                                    const ResidueModulus& m) noexcept {
  const std::uint64_t p = m.value();
  const std::uint64_t q = mul_hi_64(v, m.barrett_factor());
  std::uint64_t r = v - q * p;
  if (r >= p) r -= p;
  if (r >= p) r -= p;
  return static_cast<std::uint32_t>(r);
}

inline std::uint32_t mod_add(std::uint32_t a, std::uint32_t b,
                             const ResidueModulus& m) noexcept {
  const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
  return static_cast<std::uint32_t>(s >= m.value() ? s - m.value() : s);
}

inline std::uint32_t mod_sub(std::uint32_t a, std::uint32_t b,
                             const ResidueModulus& m) noexcept {
  return a >= b ? a - b
                : static_cast<std::uint32_t>(
                      static_cast<std::uint64_t>(a) + m.value() - b);
}

// m - x, with 0 mapped to 0.
inline std::uint32_t mod_neg(std::uint32_t x, const ResidueModulus& m) noexcept {
  return x == 0 ? 0 : m.value() - x;
}

inline std::uint32_t mod_mul(std::uint32_t a, std::uint32_t b,
                             const ResidueModulus& m) noexcept {
  return barrett_reduce(wide_mul_32x32(a, b).value(), m);
}

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t exponent,
                      const ResidueModulus& m) noexcept;

// Throws DomainError if a == 0 (mod p).
std::uint32_t mod_inverse(std::uint32_t a, const ResidueModulus& m);

// Deterministic Miller-Rabin over the full 32-bit range.
bool is_prime_u32(std::uint32_t x) noexcept;

// Returns the index-th largest prime p with exactly bit_size bits and
// p == 1 (mod 2n). Throws DomainError for bad arguments and
// ExhaustionError when fewer than index + 1 such primes exist.
ResidueModulus find_ntt_prime(std::size_t n, unsigned bit_size,
                              std::size_t index = 0);

// Walks the same downward candidate sequence as find_ntt_prime, yielding
// each prime once.
class NttPrimeSource {
 public:
  NttPrimeSource(std::size_t n, unsigned bit_size);

  ResidueModulus next();
  std::size_t yielded() const noexcept { return yielded_; }

 private:
  std::uint64_t two_n_;
  unsigned bit_size_;
  std::uint64_t floor_;      // exclusive lower bound 2^(bit_size-1)
  std::uint64_t candidate_;  // next value to test, 0 once exhausted
  std::size_t yielded_ = 0;
};

// Some psi with psi^(2n) == 1 and psi^n == p - 1. Deterministic: derived
// from the smallest base g for which g^((p-1)/2n) has order exactly 2n.
std::uint32_t find_primitive_2n_root(const ResidueModulus& m, std::size_t n);

constexpr bool is_power_of_two(std::uint64_t x) noexcept {
  return x != 0 && (x & (x - 1)) == 0;
}

constexpr unsigned log2_exact(std::uint64_t x) noexcept {
  unsigned r = 0;
  while (x > 1) {
    x >>= 1;
    ++r;
  }
  return r;
}

}  // namespace rnspim
