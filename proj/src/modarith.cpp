// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/modarith.hpp"

#include <string>

#include "rnspim/errors.hpp"

namespace rnspim {

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<u128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

ResidueModulus::ResidueModulus(std::uint32_t p, std::uint64_t two_n)
    : p_(p), barrett_(0), two_n_(two_n) {
  if (p < 3 || !is_prime_u32(p)) {
    throw DomainError("residue modulus " + std::to_string(p) +
                      " is not an odd prime");
  }
  if (!is_power_of_two(two_n) || two_n < 2) {
    throw DomainError("negacyclic order " + std::to_string(two_n) +
                      " is not a power of two >= 2");
  }
  if ((p - 1) % two_n != 0) {
    throw DomainError("modulus " + std::to_string(p) + " is not 1 mod " +
                      std::to_string(two_n));
  }
  // p is odd, so 2^64 is not a multiple of p and floor(2^64/p) equals
  // floor((2^64 - 1)/p).
  barrett_ = ~std::uint64_t{0} / p;
}

std::uint32_t mod_pow(std::uint32_t base, std::uint64_t exponent,
                      const ResidueModulus& m) noexcept {
  std::uint32_t result = 1 % m.value();
  std::uint32_t b = base % m.value();
  while (exponent != 0) {
    if (exponent & 1) result = mod_mul(result, b, m);
    b = mod_mul(b, b, m);
    exponent >>= 1;
  }
  return result;
}

std::uint32_t mod_inverse(std::uint32_t a, const ResidueModulus& m) {
  const std::int64_t p = m.value();
  std::int64_t r0 = p;
  std::int64_t r1 = a % m.value();
  if (r1 == 0) {
    throw DomainError("0 has no inverse modulo " + std::to_string(p));
  }
  std::int64_t t0 = 0;
  std::int64_t t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 != 1) {
    throw DomainError("value is not invertible modulo " + std::to_string(p));
  }
  if (t0 < 0) t0 += p;
  return static_cast<std::uint32_t>(t0);
}

bool is_prime_u32(std::uint32_t x) noexcept {
  if (x < 2) return false;
  for (std::uint32_t small : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u,
                              31u, 37u, 61u}) {
    if (x == small) return true;
    if (x % small == 0) return false;
  }
  std::uint64_t d = x - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Bases {2, 7, 61} are deterministic for all n < 4,759,123,141.
  for (std::uint64_t a : {2ull, 7ull, 61ull}) {
    std::uint64_t y = powmod_u64(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      y = mulmod_u64(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

NttPrimeSource::NttPrimeSource(std::size_t n, unsigned bit_size)
    : two_n_(2 * static_cast<std::uint64_t>(n)), bit_size_(bit_size) {
  if (!is_power_of_two(n)) {
    throw DomainError("polynomial length " + std::to_string(n) +
                      " is not a power of two");
  }
  if (bit_size < 2 || bit_size > 32) {
    throw DomainError("prime bit size " + std::to_string(bit_size) +
                      " outside [2, 32]");
  }
  const std::uint64_t ceiling = std::uint64_t{1} << bit_size;
  floor_ = ceiling >> 1;
  // Largest c < 2^bit_size with c == 1 (mod 2n).
  candidate_ = ((ceiling - 2) / two_n_) * two_n_ + 1;
  if (candidate_ <= floor_) candidate_ = 0;
}

ResidueModulus NttPrimeSource::next() {
  while (candidate_ != 0) {
    const std::uint64_t c = candidate_;
    candidate_ = (c > two_n_ && c - two_n_ > floor_) ? c - two_n_ : 0;
    if (is_prime_u32(static_cast<std::uint32_t>(c))) {
      ++yielded_;
      return ResidueModulus(static_cast<std::uint32_t>(c), two_n_);
    }
  }
  throw ExhaustionError(
      "no further " + std::to_string(bit_size_) + "-bit prime p with p == 1 (mod " +
      std::to_string(two_n_) + ") after " + std::to_string(yielded_) +
      " found; NTT needs p == 1 (mod 2n), and such primes are too scarce "
      "at small word sizes, use wider residues or fewer moduli");
}

ResidueModulus find_ntt_prime(std::size_t n, unsigned bit_size,
                              std::size_t index) {
  NttPrimeSource source(n, bit_size);
  for (std::size_t i = 0; i < index; ++i) source.next();
  return source.next();
}

std::uint32_t find_primitive_2n_root(const ResidueModulus& m, std::size_t n) {
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  const std::uint32_t p = m.value();
  if (!is_power_of_two(n) || (p - 1) % two_n != 0) {
    throw DomainError("modulus " + std::to_string(p) +
                      " does not support a primitive " +
                      std::to_string(two_n) + "-th root");
  }
  const std::uint64_t cofactor = (p - 1) / two_n;
  for (std::uint32_t g = 2; g < p; ++g) {
    const std::uint32_t psi = mod_pow(g, cofactor, m);
    // psi^(2n) == 1, so psi^n is +-1; the order is exactly 2n iff it is -1.
    if (mod_pow(psi, n, m) == p - 1) return psi;
  }
  throw DomainError("no primitive root found modulo " + std::to_string(p));
}

}  // namespace rnspim
