// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/bgv.hpp"

#include "rnspim/errors.hpp"

namespace rnspim {

LevelModulus::LevelModulus(std::shared_ptr<const RnsBase> base)
    : base_(std::move(base)) {
  if (!base_ || base_->size() == 0) {
    throw DomainError("level modulus needs a non-empty base");
  }
}

BgvProduct bgv_multiply(const Ciphertext& ct, const Ciphertext& ct2) {
  ct.validate();
  ct2.validate();
  if (!ct.c0.same_shape(ct2.c0)) {
    throw DomainError("bgv_multiply: ciphertexts differ in base or length");
  }
  if (ct.domain() != Domain::kNttBitReversed ||
      ct2.domain() != Domain::kNttBitReversed) {
    throw DomainError("bgv_multiply: ciphertexts must be in the NTT domain");
  }
  BgvProduct out{pointwise_mul(ct.c0, ct2.c0),
                 pointwise_add(pointwise_mul(ct.c0, ct2.c1),
                               pointwise_mul(ct.c1, ct2.c0)),
                 pointwise_mul(ct.c1, ct2.c1)};
  return out;
}

BgvProduct pipeline_multiply(const Ciphertext& a, const Ciphertext& b,
                             const NttContext& ntt) {
  a.validate();
  b.validate();
  const Ciphertext fa{ntt.forward(a.c0), ntt.forward(a.c1)};
  const Ciphertext fb{ntt.forward(b.c0), ntt.forward(b.c1)};
  BgvProduct product = bgv_multiply(fa, fb);
  return BgvProduct{ntt.inverse(std::move(product.c0)),
                    ntt.inverse(std::move(product.c1)),
                    ntt.inverse(std::move(product.c2))};
}

}  // namespace rnspim
