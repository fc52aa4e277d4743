// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/rns.hpp"

#include <gtest/gtest.h>

#include "gen.hpp"
#include "oracles.hpp"
#include "rnspim/errors.hpp"

namespace rnspim {
namespace {

RnsBase small_base() {
  return RnsBase({ResidueModulus(3, 2), ResidueModulus(5, 4), ResidueModulus(7, 2)});
}

BigInt random_below(gen::Gen& g, const RnsBase& base) {
  std::vector<std::uint32_t> r(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) r[i] = g.residue(base.modulus(i).value());
  return reconstruct(r, base);
}

TEST(RnsBase, CrtWeightsAreConsistent) {
  const RnsBase base = build_base(4096, 109);
  BigInt product = 1;
  for (const auto& m : base.moduli()) product *= m.value();
  EXPECT_EQ(base.product(), product);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto p = base.modulus(i).value();
    EXPECT_EQ(base.cofactor(i) * p, product);
    const auto mi = static_cast<std::uint64_t>(base.cofactor(i) % p);
    EXPECT_EQ(mi * base.cofactor_inverse(i) % p, 1u);
  }
}

TEST(RnsBase, RejectsEmptyAndDuplicateModuli) {
  EXPECT_THROW(RnsBase({}), DomainError);
  EXPECT_THROW(RnsBase({ResidueModulus(5, 4), ResidueModulus(5, 4)}), DomainError);
}

TEST(BuildBase, ModulusCountsForStandardParameters) {
  const RnsBase b4096 = build_base(4096, 109);
  EXPECT_EQ(b4096.size(), 4u);
  EXPECT_GE(boost::multiprecision::msb(b4096.product()) + 1, 109u);
  EXPECT_EQ(build_base(2048, 54).size(), 2u);
  EXPECT_EQ(build_base(1024, 27).size(), 1u);
  EXPECT_EQ(build_base(8192, 218).size(), 8u);
  for (const auto& m : b4096.moduli()) {
    EXPECT_EQ((m.value() - 1) % 8192, 0u);
    EXPECT_EQ(boost::multiprecision::msb(m.value()) + 1, kResidueBits);
  }
}

TEST(BuildBase, DeterministicAndValidated) {
  EXPECT_EQ(build_base(2048, 54), build_base(2048, 54));
  EXPECT_THROW(build_base(1000, 54), DomainError);
  EXPECT_THROW(build_base(1024, 16), DomainError);
}

TEST(BuildBase, DefaultBitsTable) {
  EXPECT_EQ(default_coefficient_bits(1024), 27u);
  EXPECT_EQ(default_coefficient_bits(2048), 54u);
  EXPECT_EQ(default_coefficient_bits(4096), 109u);
  EXPECT_EQ(default_coefficient_bits(8192), 218u);
  EXPECT_EQ(default_coefficient_bits(8), 27u);
}

TEST(Decompose, Examples) {
  const RnsBase base = small_base();
  EXPECT_EQ(decompose(0, base), (std::vector<std::uint32_t>{0, 0, 0}));
  EXPECT_EQ(decompose(23, base), (std::vector<std::uint32_t>{2, 3, 2}));
  EXPECT_EQ(decompose(base.product() - 1, base), (std::vector<std::uint32_t>{2, 4, 6}));
  EXPECT_THROW(decompose(base.product(), base), DomainError);
  EXPECT_THROW(decompose(-1, base), DomainError);
}

TEST(Reconstruct, Examples) {
  const RnsBase base = small_base();
  const std::vector<std::uint32_t> r{2, 3, 2};
  EXPECT_EQ(reconstruct(r, base), 23);
  const std::vector<std::uint32_t> zero{0, 0, 0};
  EXPECT_EQ(reconstruct(zero, base), 0);
  const std::vector<std::uint32_t> bad{3, 0, 0};
  EXPECT_THROW(reconstruct(bad, base), DomainError);
  const std::vector<std::uint32_t> short_r{1, 1};
  EXPECT_THROW(reconstruct(short_r, base), DomainError);
}

TEST(Reconstruct, MatchesIncrementalCrtOracle) {
  const RnsBase base = small_base();
  std::vector<std::uint32_t> moduli{3, 5, 7};
  for (std::uint32_t a = 0; a < 3; ++a) {
    for (std::uint32_t b = 0; b < 5; ++b) {
      for (std::uint32_t c = 0; c < 7; ++c) {
        const std::vector<std::uint32_t> r{a, b, c};
        ASSERT_EQ(reconstruct(r, base), oracle::crt_incremental(r, moduli));
      }
    }
  }
}

TEST(Rns, RoundTripAndHomomorphism) {
  for (unsigned bits : {27u, 54u, 109u, 218u}) {
    const RnsBase base = build_base(4096, bits);
    const BigInt& M = base.product();
    gen::for_all(300, bits, [&](gen::Gen& g) {
      const BigInt x = random_below(g, base), y = random_below(g, base);
      const auto xr = decompose(x, base), yr = decompose(y, base);
      ASSERT_EQ(reconstruct(xr, base), x);
      std::vector<std::uint32_t> sum(base.size()), prod(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        sum[i] = mod_add(xr[i], yr[i], base.modulus(i));
        prod[i] = mod_mul(xr[i], yr[i], base.modulus(i));
      }
      ASSERT_EQ(decompose((x + y) % M, base), sum);
      ASSERT_EQ(decompose((x * y) % M, base), prod);
    });
  }
}

TEST(RnsConfig, RoundTrip) {
  const RnsBase base = build_base(2048, 90);
  const std::string text = base_to_config(base);
  EXPECT_EQ(base_from_config(text), base);
  EXPECT_THROW(base_from_config("moduli = 17\n"), ConfigError);
  EXPECT_THROW(base_from_config("two_n = 4\nmoduli = 15\n"), DomainError);
}

}  // namespace
}  // namespace rnspim
