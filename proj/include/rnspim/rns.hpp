// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Residue number system over 32-bit NTT-friendly primes, with CRT
// reconstruction x = sum(x_i * M_i * N_i) mod M.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rnspim/modarith.hpp"

namespace rnspim {

using BigInt = boost::multiprecision::cpp_int;

// Ordered, pairwise-coprime moduli with CRT precomputation. Immutable.
class RnsBase {
 public:
  // Throws DomainError if `moduli` is empty or two moduli are equal.
  explicit RnsBase(std::vector<ResidueModulus> moduli);

  std::size_t size() const noexcept { return moduli_.size(); }
  const std::vector<ResidueModulus>& moduli() const noexcept { return moduli_; }
  const ResidueModulus& modulus(std::size_t i) const { return moduli_.at(i); }

  // M = prod m_i.
  const BigInt& product() const noexcept { return product_; }
  // M_i = M / m_i.
  const BigInt& cofactor(std::size_t i) const { return cofactors_.at(i); }
  // N_i = M_i^{-1} mod m_i.
  std::uint32_t cofactor_inverse(std::size_t i) const {
    return cofactor_inverses_.at(i);
  }

  friend bool operator==(const RnsBase& a, const RnsBase& b) {
    return a.moduli_ == b.moduli_;
  }

 private:
  std::vector<ResidueModulus> moduli_;
  BigInt product_;
  std::vector<BigInt> cofactors_;
  std::vector<std::uint32_t> cofactor_inverses_;
};

// Width of the primes build_base draws from.
inline constexpr unsigned kResidueBits = 30;

// ceil(total_bits / 30) distinct 30-bit primes, each 1 mod 2n, taken from
// the top of the range downward. Throws ExhaustionError if the range runs
// dry and DomainError for total_bits < 17 or n not a power of two.
RnsBase build_base(std::size_t n, unsigned total_bits);

// Default coefficient width for a polynomial length: 27/54/109/218 bits for
// n = 1024/2048/4096/8192; shorter lengths use 27, longer ones 218.
unsigned default_coefficient_bits(std::size_t n) noexcept;

// x_i = x mod m_i. Throws DomainError unless 0 <= x < M.
std::vector<std::uint32_t> decompose(const BigInt& x, const RnsBase& base);

// The unique x in [0, M) with x mod m_i == residues[i]. Throws DomainError
// on a length mismatch or a residue >= m_i.
BigInt reconstruct(std::span<const std::uint32_t> residues,
                   const RnsBase& base);

// Text form: "two_n = <order>" and "moduli = <p1> <p2> ...", one per line.
std::string base_to_config(const RnsBase& base);
RnsBase base_from_config(std::string_view text);

}  // namespace rnspim
