// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/ntt.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "gen.hpp"
#include "oracles.hpp"
#include "rnspim/errors.hpp"
#include "rnspim/rns.hpp"

namespace rnspim {
namespace {

TEST(BitReverse, Examples) {
  EXPECT_EQ(bit_reverse(4, 3), 1u);
  EXPECT_EQ(bit_reverse(1, 3), 4u);
  EXPECT_EQ(bit_reverse(6, 3), 3u);
  EXPECT_EQ(bit_reverse(0, 7), 0u);
  for (unsigned w = 0; w <= 12; ++w) {
    for (std::size_t i = 0; i < (std::size_t{1} << w); ++i) {
      ASSERT_EQ(bit_reverse(bit_reverse(i, w), w), i);
      ASSERT_EQ(bit_reverse(i, w), oracle::reverse_bits(i, w));
    }
  }
}

TEST(Twiddles, InvariantsAcrossLengths) {
  for (std::size_t n = 2; n <= 8192; n *= 2) {
    const auto m = find_ntt_prime(n, 30);
    const auto t = build_twiddles(m, n);
    const auto p = m.value();
    ASSERT_EQ(t.forward.size(), n);
    ASSERT_EQ(t.inverse_scrambled.size(), n);
    ASSERT_TRUE(std::all_of(t.forward.begin(), t.forward.end(),
                            [p](auto v) { return v < p; }));
    ASSERT_TRUE(std::all_of(t.inverse_scrambled.begin(), t.inverse_scrambled.end(),
                            [p](auto v) { return v < p; }));
    ASSERT_EQ(mod_mul(t.n_inv, static_cast<std::uint32_t>(n % p), m), 1u);
    ASSERT_EQ(mod_pow(t.psi, n, m), p - 1);
    const auto logical = t.inverse_logical();
    const auto psi_inv = mod_inverse(t.psi, m);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(logical[i], mod_pow(psi_inv, i, m)) << "n=" << n << " i=" << i;
    }
  }
}

TEST(Twiddles, ScrambledSlotsForLengthEight) {
  const auto m = find_ntt_prime(8, 30);
  const auto t = build_twiddles(m, 8);
  const auto psi_inv = mod_inverse(t.psi, m);
  EXPECT_EQ(t.inverse_scrambled[0], 1u);
  EXPECT_EQ(t.inverse_scrambled[1], psi_inv);
  EXPECT_EQ(t.inverse_scrambled[5], mod_pow(psi_inv, 2, m));
  // First forward stage multiplies by psi^(n/2) = psi^4.
  EXPECT_EQ(t.forward[1], mod_pow(t.psi, 4, m));
}

TEST(Twiddles, RejectUnsupportedLength) {
  EXPECT_THROW(build_twiddles(ResidueModulus(17, 16), 16), DomainError);
  EXPECT_THROW(build_twiddles(ResidueModulus(17, 16), 1), DomainError);
}

TEST(NttPlan, StagesMatchLogLength) {
  const auto plan = NttPlan::make(4096);
  EXPECT_EQ(plan.log2n, 12u);
  EXPECT_EQ(plan.stages, 12u);
  EXPECT_THROW(NttPlan::make(100), DomainError);
}

TEST(NttForward, ButterflyOutputOrderAtLengthEight) {
  const auto m = find_ntt_prime(8, 30);
  const auto t = build_twiddles(m, 8);
  const std::uint64_t p = m.value();
  std::vector<std::uint32_t> a{3, 1, 4, 1, 5, 9, 2, 6};
  // t_j = A(psi^(2j+1)) in natural evaluation order.
  std::vector<std::uint32_t> natural(8);
  for (std::size_t j = 0; j < 8; ++j) {
    natural[j] = static_cast<std::uint32_t>(
        oracle::evaluate(a, oracle::powmod(t.psi, 2 * j + 1, p), p));
  }
  auto out = a;
  ntt_forward_inplace(out, t);
  const std::size_t order[8] = {0, 4, 2, 6, 1, 5, 3, 7};
  for (std::size_t slot = 0; slot < 8; ++slot) {
    EXPECT_EQ(out[slot], natural[order[slot]]) << "slot " << slot;
  }
}

TEST(NttForward, MatchesDirectEvaluation) {
  gen::for_all(40, 21, [](gen::Gen& g) {
    const std::size_t n = g.pow2(1, 9);
    const auto m = find_ntt_prime(n, 30, g.u32(0, 3));
    const auto t = build_twiddles(m, n);
    const auto a = g.residues(n, m.value());
    auto out = a;
    ntt_forward_inplace(out, t);
    ASSERT_EQ(out, oracle::direct_negacyclic_spectrum(a, t.psi, m.value()));
  });
}

TEST(Ntt, ZeroMapsToZero) {
  const auto m = find_ntt_prime(64, 30);
  const auto t = build_twiddles(m, 64);
  std::vector<std::uint32_t> z(64, 0);
  ntt_forward_inplace(z, t);
  EXPECT_EQ(z, std::vector<std::uint32_t>(64, 0));
  ntt_inverse_inplace(z, t);
  EXPECT_EQ(z, std::vector<std::uint32_t>(64, 0));
}

TEST(Ntt, RoundTripEveryLength) {
  for (std::size_t n = 2; n <= 8192; n *= 2) {
    const auto base = build_base(n, default_coefficient_bits(n));
    for (std::size_t i = 0; i < base.size(); ++i) {
      const auto t = build_twiddles(base.modulus(i), n, i);
      gen::for_all(3, n + i, [&](gen::Gen& g) {
        const auto a = g.residues(n, base.modulus(i).value());
        auto b = a;
        ntt_forward_inplace(b, t);
        ntt_inverse_inplace(b, t);
        ASSERT_EQ(a, b);
      });
    }
  }
}

TEST(Ntt, ConvolutionTheorem) {
  gen::for_all(60, 22, [](gen::Gen& g) {
    const std::size_t n = g.pow2(1, 8);
    const auto m = find_ntt_prime(n, 30);
    const auto t = build_twiddles(m, n);
    SubPolynomial a{g.residues(n, m.value()), 0, Domain::kCoefficient};
    SubPolynomial b{g.residues(n, m.value()), 0, Domain::kCoefficient};
    const auto fa = ntt_forward(a, t), fb = ntt_forward(b, t);
    SubPolynomial prod = fa;
    for (std::size_t j = 0; j < n; ++j) {
      prod.coeffs[j] = mod_mul(fa.coeffs[j], fb.coeffs[j], m);
    }
    ASSERT_EQ(ntt_inverse(prod, t), schoolbook_negacyclic_mul(a, b, m));
  });
}

TEST(Ntt, Linearity) {
  gen::for_all(30, 23, [](gen::Gen& g) {
    const std::size_t n = g.pow2(2, 10);
    const auto m = find_ntt_prime(n, 30);
    const auto t = build_twiddles(m, n);
    auto a = g.residues(n, m.value()), b = g.residues(n, m.value());
    std::vector<std::uint32_t> s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = mod_add(a[j], b[j], m);
    ntt_forward_inplace(a, t);
    ntt_forward_inplace(b, t);
    ntt_forward_inplace(s, t);
    for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(s[j], mod_add(a[j], b[j], m));
  });
}

TEST(Ntt, TwiddleTablesAreReadSequentially) {
  for (std::size_t n : {8, 64, 1024}) {
    const auto m = find_ntt_prime(n, 30);
    const auto t = build_twiddles(m, n);
    std::vector<std::uint32_t> a(n, 1);
    std::vector<std::size_t> fwd, inv;
    ntt_forward_traced(a, t, fwd);
    ntt_inverse_traced(a, t, inv);
    ASSERT_EQ(fwd.size(), n - 1);
    ASSERT_EQ(inv.size(), n - 1);
    for (std::size_t i = 0; i < n - 1; ++i) {
      EXPECT_EQ(fwd[i], i + 1);
      EXPECT_EQ(inv[i], i + 1);
    }
  }
}

TEST(Ntt, ValueLevelChecksDomainAndShape) {
  const auto m = find_ntt_prime(16, 30);
  const auto t = build_twiddles(m, 16);
  SubPolynomial coeff{std::vector<std::uint32_t>(16, 1), 0, Domain::kCoefficient};
  const auto f = ntt_forward(coeff, t);
  EXPECT_EQ(f.domain, Domain::kNttBitReversed);
  EXPECT_THROW(ntt_forward(f, t), DomainError);
  EXPECT_THROW(ntt_inverse(coeff, t), DomainError);
  SubPolynomial short_sub{std::vector<std::uint32_t>(8, 1), 0, Domain::kCoefficient};
  EXPECT_THROW(ntt_forward(short_sub, t), DomainError);
  SubPolynomial wrong_index{std::vector<std::uint32_t>(16, 1), 3, Domain::kCoefficient};
  EXPECT_THROW(ntt_forward(wrong_index, t), DomainError);
  EXPECT_EQ(ntt_inverse(f, t), coeff);
}

TEST(NttContext, TransformsEveryModulus) {
  auto base = std::make_shared<const RnsBase>(build_base(256, 109));
  const NttContext ctx(base, 256);
  std::mt19937_64 rng(24);
  const auto a = random_polynomial(base, 256, Domain::kCoefficient, rng);
  const auto f = ctx.forward(a);
  EXPECT_EQ(f.domain(), Domain::kNttBitReversed);
  for (std::size_t i = 0; i < base->size(); ++i) {
    auto expected = a.extract(i).coeffs;
    ntt_forward_inplace(expected, ctx.table(i));
    const auto got = f.sub(i);
    EXPECT_TRUE(std::equal(expected.begin(), expected.end(), got.begin()));
  }
  EXPECT_EQ(ctx.inverse(f), a);
  EXPECT_THROW(ctx.forward(f), DomainError);
  EXPECT_THROW(ctx.inverse(a), DomainError);
}

}  // namespace
}  // namespace rnspim
