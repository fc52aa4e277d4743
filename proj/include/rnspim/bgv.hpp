// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// BGV ciphertext multiplication in the RNS/NTT representation:
//   c0 = ct0 * ct'0,  c1 = ct0 * ct'1 + ct1 * ct'0,  c2 = ct1 * ct'1
// with every product and sum taken residue by residue modulo q_l, where
// q_l is the product of the ciphertexts' RNS base. No relinearization.

#pragma once

#include "rnspim/ntt.hpp"
#include "rnspim/polyring.hpp"

namespace rnspim {

// The modulus q_l at the current level, carried as the active base.
class LevelModulus {
 public:
  // Throws DomainError on a null base.
  explicit LevelModulus(std::shared_ptr<const RnsBase> base);

  const RnsBase& base() const noexcept { return *base_; }
  const BigInt& value() const noexcept { return base_->product(); }

 private:
  std::shared_ptr<const RnsBase> base_;
};

// Both ciphertexts must be in the NTT domain with matching base and n.
BgvProduct bgv_multiply(const Ciphertext& ct, const Ciphertext& ct2);

// NTT on all four input polynomials, bgv_multiply, then iNTT on the three
// outputs. Inputs and result are in the coefficient domain.
BgvProduct pipeline_multiply(const Ciphertext& a, const Ciphertext& b,
                             const NttContext& ntt);

}  // namespace rnspim
