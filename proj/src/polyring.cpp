// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/polyring.hpp"

#include <string>

#include "rnspim/errors.hpp"

namespace rnspim {

namespace {

void require_same_shape(const RnsPolynomial& a, const RnsPolynomial& b,
                        const char* op) {
  if (!a.same_shape(b)) {
    throw DomainError(std::string(op) + ": operands differ in base or length");
  }
  if (a.domain() != b.domain()) {
    throw DomainError(std::string(op) + ": operands in different domains (" +
                      to_string(a.domain()) + " vs " + to_string(b.domain()) +
                      ")");
  }
}

template <typename Op>
RnsPolynomial residue_wise(const RnsPolynomial& a, const RnsPolynomial& b,
                           Op op) {
  RnsPolynomial out(a.shared_base(), a.n(), a.domain());
  for (std::size_t i = 0; i < a.num_moduli(); ++i) {
    const auto& m = a.base().modulus(i);
    const auto x = a.sub(i);
    const auto y = b.sub(i);
    auto z = out.sub(i);
    for (std::size_t j = 0; j < a.n(); ++j) z[j] = op(x[j], y[j], m);
  }
  return out;
}

}  // namespace

const char* to_string(Domain domain) noexcept {
  return domain == Domain::kCoefficient ? "coefficient" : "ntt-bit-reversed";
}

RnsPolynomial::RnsPolynomial(std::shared_ptr<const RnsBase> base,
                             std::size_t n, Domain domain)
    : base_(std::move(base)), n_(n), domain_(domain) {
  if (!base_) throw DomainError("polynomial needs an RNS base");
  if (!is_power_of_two(n_)) {
    throw DomainError("polynomial length " + std::to_string(n_) +
                      " is not a power of two");
  }
  residues_.assign(base_->size() * n_, 0);
}

RnsPolynomial RnsPolynomial::from_residues(std::shared_ptr<const RnsBase> base,
                                           std::size_t n, Domain domain,
                                           std::vector<std::uint32_t> residues) {
  RnsPolynomial poly(std::move(base), n, domain);
  if (residues.size() != poly.residues_.size()) {
    throw DomainError("expected " + std::to_string(poly.residues_.size()) +
                      " residues, got " + std::to_string(residues.size()));
  }
  for (std::size_t i = 0; i < poly.num_moduli(); ++i) {
    const auto p = poly.base().modulus(i).value();
    for (std::size_t j = 0; j < n; ++j) {
      if (residues[i * n + j] >= p) {
        throw DomainError("residue at sub-polynomial " + std::to_string(i) +
                          ", slot " + std::to_string(j) + " not reduced");
      }
    }
  }
  poly.residues_ = std::move(residues);
  return poly;
}

RnsPolynomial RnsPolynomial::from_coefficients(
    std::shared_ptr<const RnsBase> base, std::span<const BigInt> coeffs,
    Domain domain) {
  RnsPolynomial poly(std::move(base), coeffs.size(), domain);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const auto residues = decompose(coeffs[j], poly.base());
    for (std::size_t i = 0; i < residues.size(); ++i) {
      poly.residues_[i * poly.n_ + j] = residues[i];
    }
  }
  return poly;
}

std::span<std::uint32_t> RnsPolynomial::sub(std::size_t i) {
  if (i >= num_moduli()) throw DomainError("sub-polynomial index out of range");
  return std::span<std::uint32_t>(residues_).subspan(i * n_, n_);
}

std::span<const std::uint32_t> RnsPolynomial::sub(std::size_t i) const {
  if (i >= num_moduli()) throw DomainError("sub-polynomial index out of range");
  return std::span<const std::uint32_t>(residues_).subspan(i * n_, n_);
}

SubPolynomial RnsPolynomial::extract(std::size_t i) const {
  const auto view = sub(i);
  return SubPolynomial{{view.begin(), view.end()}, i, domain_};
}

void RnsPolynomial::assign(const SubPolynomial& s) {
  if (s.size() != n_ || s.modulus_index >= num_moduli()) {
    throw DomainError("sub-polynomial does not fit this polynomial");
  }
  if (s.domain != domain_) {
    throw DomainError("sub-polynomial domain differs from polynomial domain");
  }
  const auto p = base_->modulus(s.modulus_index).value();
  auto dst = sub(s.modulus_index);
  for (std::size_t j = 0; j < n_; ++j) {
    if (s.coeffs[j] >= p) throw DomainError("sub-polynomial residue not reduced");
    dst[j] = s.coeffs[j];
  }
}

std::vector<BigInt> RnsPolynomial::lift() const {
  std::vector<BigInt> out;
  out.reserve(n_);
  std::vector<std::uint32_t> slot(num_moduli());
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = 0; i < num_moduli(); ++i) slot[i] = residues_[i * n_ + j];
    out.push_back(reconstruct(slot, *base_));
  }
  return out;
}

bool RnsPolynomial::same_shape(const RnsPolynomial& other) const noexcept {
  return n_ == other.n_ &&
         (base_ == other.base_ || *base_ == *other.base_);
}

void Ciphertext::validate() const {
  if (!c0.same_shape(c1) || c0.domain() != c1.domain()) {
    throw DomainError("ciphertext parts differ in base, length or domain");
  }
}

void BgvProduct::validate() const {
  if (!c0.same_shape(c1) || !c0.same_shape(c2) || c0.domain() != c1.domain() ||
      c0.domain() != c2.domain()) {
    throw DomainError("product parts differ in base, length or domain");
  }
}

RnsPolynomial pointwise_add(const RnsPolynomial& a, const RnsPolynomial& b) {
  require_same_shape(a, b, "pointwise_add");
  return residue_wise(a, b, mod_add);
}

RnsPolynomial pointwise_sub(const RnsPolynomial& a, const RnsPolynomial& b) {
  require_same_shape(a, b, "pointwise_sub");
  return residue_wise(a, b, mod_sub);
}

RnsPolynomial negate(const RnsPolynomial& a) {
  RnsPolynomial out(a.shared_base(), a.n(), a.domain());
  for (std::size_t i = 0; i < a.num_moduli(); ++i) {
    const auto& m = a.base().modulus(i);
    const auto x = a.sub(i);
    auto z = out.sub(i);
    for (std::size_t j = 0; j < a.n(); ++j) z[j] = mod_neg(x[j], m);
  }
  return out;
}

RnsPolynomial pointwise_mul(const RnsPolynomial& a, const RnsPolynomial& b) {
  require_same_shape(a, b, "pointwise_mul");
  if (a.domain() != Domain::kNttBitReversed) {
    throw DomainError(
        "pointwise_mul: operands must be in the NTT domain, got coefficient");
  }
  return residue_wise(a, b, mod_mul);
}

SubPolynomial schoolbook_negacyclic_mul(const SubPolynomial& a,
                                        const SubPolynomial& b,
                                        const ResidueModulus& m) {
  if (a.size() != b.size() || !is_power_of_two(a.size())) {
    throw DomainError("schoolbook multiply: length mismatch");
  }
  if (a.domain != Domain::kCoefficient || b.domain != Domain::kCoefficient) {
    throw DomainError("schoolbook multiply needs coefficient-domain operands");
  }
  if (a.modulus_index != b.modulus_index) {
    throw DomainError("schoolbook multiply: operands use different moduli");
  }
  const std::size_t n = a.size();
  SubPolynomial out{std::vector<std::uint32_t>(n, 0), a.modulus_index,
                    Domain::kCoefficient};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      const std::uint32_t term = mod_mul(a.coeffs[i], b.coeffs[l], m);
      const std::size_t j = i + l;
      // x^n == -1 negates wrapped terms.
      if (j < n) {
        out.coeffs[j] = mod_add(out.coeffs[j], term, m);
      } else {
        out.coeffs[j - n] = mod_sub(out.coeffs[j - n], term, m);
      }
    }
  }
  return out;
}

RnsPolynomial schoolbook_negacyclic_mul(const RnsPolynomial& a,
                                        const RnsPolynomial& b) {
  require_same_shape(a, b, "schoolbook_negacyclic_mul");
  RnsPolynomial out(a.shared_base(), a.n(), Domain::kCoefficient);
  for (std::size_t i = 0; i < a.num_moduli(); ++i) {
    out.assign(schoolbook_negacyclic_mul(a.extract(i), b.extract(i),
                                         a.base().modulus(i)));
  }
  return out;
}

std::vector<std::uint32_t> tuple_of_arrays_to_array_of_tuples(
    std::span<const std::uint32_t> buffer, std::size_t n, std::size_t k) {
  if (buffer.size() != n * k) throw DomainError("layout buffer size mismatch");
  std::vector<std::uint32_t> out(buffer.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j * k + i] = buffer[i * n + j];
  }
  return out;
}

std::vector<std::uint32_t> array_of_tuples_to_tuple_of_arrays(
    std::span<const std::uint32_t> buffer, std::size_t n, std::size_t k) {
  if (buffer.size() != n * k) throw DomainError("layout buffer size mismatch");
  std::vector<std::uint32_t> out(buffer.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = buffer[j * k + i];
  }
  return out;
}

std::vector<std::uint32_t> convert_layout(const RnsPolynomial& poly,
                                          Layout target) {
  const auto data = poly.data();
  if (target == Layout::kTupleOfArrays) return {data.begin(), data.end()};
  return tuple_of_arrays_to_array_of_tuples(data, poly.n(), poly.num_moduli());
}

std::vector<std::uint8_t> dump_sub_polynomial(const SubPolynomial& sub) {
  std::vector<std::uint8_t> bytes(sub.size() * 4);
  for (std::size_t j = 0; j < sub.size(); ++j) {
    const std::uint32_t v = sub.coeffs[j];
    bytes[4 * j + 0] = static_cast<std::uint8_t>(v);
    bytes[4 * j + 1] = static_cast<std::uint8_t>(v >> 8);
    bytes[4 * j + 2] = static_cast<std::uint8_t>(v >> 16);
    bytes[4 * j + 3] = static_cast<std::uint8_t>(v >> 24);
  }
  return bytes;
}

SubPolynomial load_sub_polynomial(std::span<const std::uint8_t> bytes,
                                  std::size_t modulus_index, Domain domain) {
  if (bytes.size() % 4 != 0 || !is_power_of_two(bytes.size() / 4)) {
    throw DomainError("sub-polynomial dump must hold a power-of-two count of "
                      "4-byte residues");
  }
  SubPolynomial sub{std::vector<std::uint32_t>(bytes.size() / 4),
                    modulus_index, domain};
  for (std::size_t j = 0; j < sub.size(); ++j) {
    sub.coeffs[j] = static_cast<std::uint32_t>(bytes[4 * j]) |
                    static_cast<std::uint32_t>(bytes[4 * j + 1]) << 8 |
                    static_cast<std::uint32_t>(bytes[4 * j + 2]) << 16 |
                    static_cast<std::uint32_t>(bytes[4 * j + 3]) << 24;
  }
  return sub;
}

RnsPolynomial random_polynomial(std::shared_ptr<const RnsBase> base,
                                std::size_t n, Domain domain,
                                std::mt19937_64& rng) {
  RnsPolynomial poly(std::move(base), n, domain);
  for (std::size_t i = 0; i < poly.num_moduli(); ++i) {
    std::uniform_int_distribution<std::uint32_t> dist(
        0, poly.base().modulus(i).value() - 1);
    for (auto& x : poly.sub(i)) x = dist(rng);
  }
  return poly;
}

}  // namespace rnspim
