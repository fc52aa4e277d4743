// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Polynomials in Z_M[x]/(x^n + 1) stored as a tuple of arrays of residues:
// k sub-polynomials of length n, each contiguous, back to back in one
// buffer. The evaluation domain travels with the data and is checked at
// every operation boundary.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "rnspim/rns.hpp"

namespace rnspim {

enum class Domain { kCoefficient, kNttBitReversed };

const char* to_string(Domain domain) noexcept;

// The residues of one polynomial under a single modulus of a base.
struct SubPolynomial {
  std::vector<std::uint32_t> coeffs;
  std::size_t modulus_index = 0;
  Domain domain = Domain::kCoefficient;

  std::size_t size() const noexcept { return coeffs.size(); }
  friend bool operator==(const SubPolynomial&, const SubPolynomial&) = default;
};

class RnsPolynomial {
 public:
  // Zero polynomial. Throws DomainError unless n is a power of two.
  RnsPolynomial(std::shared_ptr<const RnsBase> base, std::size_t n,
                Domain domain = Domain::kCoefficient);

  // Adopts a tuple-of-arrays buffer of k * n residues. Throws DomainError on
  // a size mismatch or an unreduced residue.
  static RnsPolynomial from_residues(std::shared_ptr<const RnsBase> base,
                                     std::size_t n, Domain domain,
                                     std::vector<std::uint32_t> residues);

  // Decomposes n big-integer coefficients, each in [0, M).
  static RnsPolynomial from_coefficients(std::shared_ptr<const RnsBase> base,
                                         std::span<const BigInt> coeffs,
                                         Domain domain = Domain::kCoefficient);

  std::size_t n() const noexcept { return n_; }
  std::size_t num_moduli() const noexcept { return base_->size(); }
  Domain domain() const noexcept { return domain_; }
  void set_domain(Domain domain) noexcept { domain_ = domain; }
  const RnsBase& base() const noexcept { return *base_; }
  const std::shared_ptr<const RnsBase>& shared_base() const noexcept {
    return base_;
  }

  std::span<std::uint32_t> sub(std::size_t i);
  std::span<const std::uint32_t> sub(std::size_t i) const;

  // The whole tuple-of-arrays buffer.
  std::span<std::uint32_t> data() noexcept { return residues_; }
  std::span<const std::uint32_t> data() const noexcept { return residues_; }

  SubPolynomial extract(std::size_t i) const;
  // Throws DomainError if `sub` does not match this polynomial's shape.
  void assign(const SubPolynomial& sub);

  // CRT-lifts every coefficient slot back to [0, M).
  std::vector<BigInt> lift() const;

  bool same_shape(const RnsPolynomial& other) const noexcept;

  friend bool operator==(const RnsPolynomial& a, const RnsPolynomial& b) {
    return a.same_shape(b) && a.domain_ == b.domain_ &&
           a.residues_ == b.residues_;
  }

 private:
  std::shared_ptr<const RnsBase> base_;
  std::size_t n_;
  Domain domain_;
  std::vector<std::uint32_t> residues_;
};

struct Ciphertext {
  RnsPolynomial c0;
  RnsPolynomial c1;

  // Throws DomainError unless both parts share base, n and domain.
  void validate() const;
  Domain domain() const noexcept { return c0.domain(); }
};

struct BgvProduct {
  RnsPolynomial c0;
  RnsPolynomial c1;
  RnsPolynomial c2;

  void validate() const;
  friend bool operator==(const BgvProduct&, const BgvProduct&) = default;
};

// Residue-wise (a + b) mod m_i. Operands must share base, n and domain.
RnsPolynomial pointwise_add(const RnsPolynomial& a, const RnsPolynomial& b);
RnsPolynomial pointwise_sub(const RnsPolynomial& a, const RnsPolynomial& b);
RnsPolynomial negate(const RnsPolynomial& a);

// Slot-wise modular product; both operands must be in the NTT domain.
RnsPolynomial pointwise_mul(const RnsPolynomial& a, const RnsPolynomial& b);

// O(n^2) product in Z_p[x]/(x^n + 1); both operands in coefficient domain.
SubPolynomial schoolbook_negacyclic_mul(const SubPolynomial& a,
                                        const SubPolynomial& b,
                                        const ResidueModulus& m);
RnsPolynomial schoolbook_negacyclic_mul(const RnsPolynomial& a,
                                        const RnsPolynomial& b);

enum class Layout { kTupleOfArrays, kArrayOfTuples };

// Flattens `poly` into the requested layout. Tuple-of-arrays is the native
// storage order; array-of-tuples interleaves the k residues of each slot.
std::vector<std::uint32_t> convert_layout(const RnsPolynomial& poly,
                                          Layout target);

// Permutations between the two layouts for a flat k * n buffer.
std::vector<std::uint32_t> tuple_of_arrays_to_array_of_tuples(
    std::span<const std::uint32_t> buffer, std::size_t n, std::size_t k);
std::vector<std::uint32_t> array_of_tuples_to_tuple_of_arrays(
    std::span<const std::uint32_t> buffer, std::size_t n, std::size_t k);

// n little-endian 4-byte residues.
std::vector<std::uint8_t> dump_sub_polynomial(const SubPolynomial& sub);
// Throws DomainError unless the byte count is 4 * (power of two).
SubPolynomial load_sub_polynomial(std::span<const std::uint8_t> bytes,
                                  std::size_t modulus_index, Domain domain);

// Uniform residues in every slot.
RnsPolynomial random_polynomial(std::shared_ptr<const RnsBase> base,
                                std::size_t n, Domain domain,
                                std::mt19937_64& rng);

}  // namespace rnspim
