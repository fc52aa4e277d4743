// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/rns.hpp"

#include <algorithm>
#include <limits>

#include "rnspim/errors.hpp"
#include "rnspim/kvconfig.hpp"

namespace rnspim {

RnsBase::RnsBase(std::vector<ResidueModulus> moduli)
    : moduli_(std::move(moduli)), product_(1) {
  if (moduli_.empty()) throw DomainError("RNS base needs at least one modulus");
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    for (std::size_t j = i + 1; j < moduli_.size(); ++j) {
      // Moduli are prime, so distinct implies coprime.
      if (moduli_[i].value() == moduli_[j].value()) {
        throw DomainError("RNS moduli must be pairwise coprime; " +
                          std::to_string(moduli_[i].value()) + " repeats");
      }
    }
    product_ *= moduli_[i].value();
  }
  cofactors_.reserve(moduli_.size());
  cofactor_inverses_.reserve(moduli_.size());
  for (const auto& m : moduli_) {
    BigInt cofactor = product_ / m.value();
    const auto reduced = static_cast<std::uint32_t>(cofactor % m.value());
    cofactor_inverses_.push_back(mod_inverse(reduced, m));
    cofactors_.push_back(std::move(cofactor));
  }
}

RnsBase build_base(std::size_t n, unsigned total_bits) {
  if (total_bits < 17) {
    throw DomainError("coefficient width " + std::to_string(total_bits) +
                      " below the 17-bit minimum");
  }
  const std::size_t k = (total_bits + kResidueBits - 1) / kResidueBits;
  NttPrimeSource source(n, kResidueBits);
  std::vector<ResidueModulus> moduli;
  moduli.reserve(k);
  for (std::size_t i = 0; i < k; ++i) moduli.push_back(source.next());
  RnsBase base(std::move(moduli));
  if (msb(base.product()) + 1 < total_bits) {
    throw ExhaustionError("RNS product of " + std::to_string(k) +
                          " moduli does not reach " +
                          std::to_string(total_bits) + " bits");
  }
  return base;
}

unsigned default_coefficient_bits(std::size_t n) noexcept {
  if (n <= 1024) return 27;
  if (n <= 2048) return 54;
  if (n <= 4096) return 109;
  return 218;
}

std::vector<std::uint32_t> decompose(const BigInt& x, const RnsBase& base) {
  if (x < 0 || x >= base.product()) {
    throw DomainError("value outside [0, M) for RNS decomposition");
  }
  std::vector<std::uint32_t> residues;
  residues.reserve(base.size());
  for (const auto& m : base.moduli()) {
    residues.push_back(static_cast<std::uint32_t>(x % m.value()));
  }
  return residues;
}

BigInt reconstruct(std::span<const std::uint32_t> residues,
                   const RnsBase& base) {
  if (residues.size() != base.size()) {
    throw DomainError("expected " + std::to_string(base.size()) +
                      " residues, got " + std::to_string(residues.size()));
  }
  BigInt sum = 0;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const auto& m = base.modulus(i);
    if (residues[i] >= m.value()) {
      throw DomainError("residue " + std::to_string(residues[i]) +
                        " not reduced modulo " + std::to_string(m.value()));
    }
    // (x_i * N_i mod m_i) * M_i keeps every term below M.
    const std::uint32_t scaled = mod_mul(residues[i], base.cofactor_inverse(i), m);
    sum += base.cofactor(i) * scaled;
  }
  return sum % base.product();
}

std::string base_to_config(const RnsBase& base) {
  std::uint64_t two_n = std::numeric_limits<std::uint64_t>::max();
  std::string moduli;
  for (const auto& m : base.moduli()) {
    two_n = std::min(two_n, m.two_n());
    if (!moduli.empty()) moduli += ' ';
    moduli += std::to_string(m.value());
  }
  return "two_n = " + std::to_string(two_n) + "\nmoduli = " + moduli + "\n";
}

RnsBase base_from_config(std::string_view text) {
  const auto config = KeyValueConfig::parse(text);
  config.require_known({"two_n", "moduli"});
  const auto two_n = config.get_u64("two_n");
  const auto primes = config.get_u64_list("moduli");
  if (!two_n || !primes) {
    throw ConfigError("RNS base config needs 'two_n' and 'moduli'");
  }
  std::vector<ResidueModulus> moduli;
  for (const auto p : *primes) {
    if (p > std::numeric_limits<std::uint32_t>::max()) {
      throw ConfigError("modulus " + std::to_string(p) + " exceeds 32 bits");
    }
    moduli.emplace_back(static_cast<std::uint32_t>(p), *two_n);
  }
  return RnsBase(std::move(moduli));
}

}  // namespace rnspim
