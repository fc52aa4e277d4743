// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/ntt.hpp"

#include <string>

#include "rnspim/errors.hpp"

namespace rnspim {

namespace {

struct NoTrace {
  void operator()(std::size_t) const noexcept {}
};

struct VectorTrace {
  std::vector<std::size_t>* reads;
  void operator()(std::size_t i) const { reads->push_back(i); }
};

void check_span(std::span<const std::uint32_t> a, const TwiddleTable& table) {
  if (a.size() != table.n) {
    throw DomainError("transform length " + std::to_string(a.size()) +
                      " does not match twiddle table length " +
                      std::to_string(table.n));
  }
}

template <typename Trace>
void forward_kernel(std::span<std::uint32_t> a, const TwiddleTable& t,
                    Trace trace) {
  const auto& m = t.modulus;
  const std::size_t n = t.n;
  std::size_t root = 1;
  for (std::size_t gap = n / 2, groups = 1; gap >= 1; gap /= 2, groups *= 2) {
    for (std::size_t g = 0; g < groups; ++g) {
      trace(root);
      const std::uint32_t w = t.forward[root++];
      const std::size_t start = 2 * g * gap;
      for (std::size_t j = start; j < start + gap; ++j) {
        const std::uint32_t u = a[j];
        const std::uint32_t v = mod_mul(a[j + gap], w, m);
        a[j] = mod_add(u, v, m);
        a[j + gap] = mod_sub(u, v, m);
      }
    }
  }
}

template <typename Trace>
void inverse_kernel(std::span<std::uint32_t> a, const TwiddleTable& t,
                    Trace trace) {
  const auto& m = t.modulus;
  const std::size_t n = t.n;
  std::size_t root = 1;
  for (std::size_t gap = 1, groups = n / 2; groups >= 1; gap *= 2, groups /= 2) {
    for (std::size_t g = 0; g < groups; ++g) {
      trace(root);
      const std::uint32_t w = t.inverse_scrambled[root++];
      const std::size_t start = 2 * g * gap;
      for (std::size_t j = start; j < start + gap; ++j) {
        const std::uint32_t u = a[j];
        const std::uint32_t v = a[j + gap];
        a[j] = mod_add(u, v, m);
        a[j + gap] = mod_mul(mod_sub(u, v, m), w, m);
      }
    }
  }
  for (auto& x : a) x = mod_mul(x, t.n_inv, m);
}

}  // namespace

std::vector<std::uint32_t> TwiddleTable::inverse_logical() const {
  const unsigned width = log2_exact(n);
  std::vector<std::uint32_t> out(n);
  out[0] = inverse_scrambled[0];
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = inverse_scrambled[1 + bit_reverse(i - 1, width)];
  }
  return out;
}

TwiddleTable build_twiddles(const ResidueModulus& m, std::size_t n,
                            std::size_t modulus_index) {
  if (!is_power_of_two(n) || n < 2) {
    throw DomainError("NTT length " + std::to_string(n) +
                      " must be a power of two >= 2");
  }
  const std::uint32_t psi = find_primitive_2n_root(m, n);
  const std::uint32_t psi_inv = mod_inverse(psi, m);
  const unsigned width = log2_exact(n);

  TwiddleTable t{modulus_index, m, n, psi, std::vector<std::uint32_t>(n),
                 std::vector<std::uint32_t>(n),
                 mod_inverse(static_cast<std::uint32_t>(n % m.value()), m)};

  std::vector<std::uint32_t> powers(n);
  std::vector<std::uint32_t> inv_powers(n);
  powers[0] = 1;
  inv_powers[0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    powers[i] = mod_mul(powers[i - 1], psi, m);
    inv_powers[i] = mod_mul(inv_powers[i - 1], psi_inv, m);
  }
  for (std::size_t k = 0; k < n; ++k) {
    t.forward[k] = powers[bit_reverse(k, width)];
  }
  t.inverse_scrambled[0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    t.inverse_scrambled[1 + bit_reverse(i - 1, width)] = inv_powers[i];
  }
  return t;
}

NttPlan NttPlan::make(std::size_t n, Threading threading) {
  if (!is_power_of_two(n)) {
    throw DomainError("NTT length " + std::to_string(n) +
                      " is not a power of two");
  }
  const unsigned log2n = log2_exact(n);
  return NttPlan{n, log2n, log2n, threading};
}

void ntt_forward_inplace(std::span<std::uint32_t> a, const TwiddleTable& table) {
  check_span(a, table);
  forward_kernel(a, table, NoTrace{});
}

void ntt_inverse_inplace(std::span<std::uint32_t> a, const TwiddleTable& table) {
  check_span(a, table);
  inverse_kernel(a, table, NoTrace{});
}

void ntt_forward_traced(std::span<std::uint32_t> a, const TwiddleTable& table,
                        std::vector<std::size_t>& reads) {
  check_span(a, table);
  forward_kernel(a, table, VectorTrace{&reads});
}

void ntt_inverse_traced(std::span<std::uint32_t> a, const TwiddleTable& table,
                        std::vector<std::size_t>& reads) {
  check_span(a, table);
  inverse_kernel(a, table, VectorTrace{&reads});
}

SubPolynomial ntt_forward(SubPolynomial sub, const TwiddleTable& table) {
  if (sub.domain != Domain::kCoefficient) {
    throw DomainError("ntt_forward expects a coefficient-domain input");
  }
  if (sub.modulus_index != table.modulus_index) {
    throw DomainError("twiddle table belongs to a different modulus");
  }
  ntt_forward_inplace(sub.coeffs, table);
  sub.domain = Domain::kNttBitReversed;
  return sub;
}

SubPolynomial ntt_inverse(SubPolynomial sub, const TwiddleTable& table) {
  if (sub.domain != Domain::kNttBitReversed) {
    throw DomainError("ntt_inverse expects an NTT-domain input");
  }
  if (sub.modulus_index != table.modulus_index) {
    throw DomainError("twiddle table belongs to a different modulus");
  }
  ntt_inverse_inplace(sub.coeffs, table);
  sub.domain = Domain::kCoefficient;
  return sub;
}

NttContext::NttContext(std::shared_ptr<const RnsBase> base, std::size_t n)
    : base_(std::move(base)), n_(n) {
  if (!base_) throw DomainError("NTT context needs an RNS base");
  tables_.reserve(base_->size());
  for (std::size_t i = 0; i < base_->size(); ++i) {
    tables_.push_back(build_twiddles(base_->modulus(i), n_, i));
  }
}

void NttContext::check(const RnsPolynomial& poly, Domain expected) const {
  if (poly.n() != n_ || !(poly.base() == *base_)) {
    throw DomainError("polynomial does not match the NTT context");
  }
  if (poly.domain() != expected) {
    throw DomainError(std::string("expected ") + to_string(expected) +
                      " domain, got " + to_string(poly.domain()));
  }
}

RnsPolynomial NttContext::forward(RnsPolynomial poly) const {
  check(poly, Domain::kCoefficient);
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    forward_kernel(poly.sub(i), tables_[i], NoTrace{});
  }
  poly.set_domain(Domain::kNttBitReversed);
  return poly;
}

RnsPolynomial NttContext::inverse(RnsPolynomial poly) const {
  check(poly, Domain::kNttBitReversed);
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    inverse_kernel(poly.sub(i), tables_[i], NoTrace{});
  }
  poly.set_domain(Domain::kCoefficient);
  return poly;
}

}  // namespace rnspim
