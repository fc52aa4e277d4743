// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rnspim/bench.hpp"
#include "rnspim/bgv.hpp"
#include "rnspim/errors.hpp"
#include "rnspim/modarith.hpp"
#include "rnspim/ntt.hpp"
#include "rnspim/pimiface.hpp"
#include "rnspim/pimsim.hpp"
#include "rnspim/polyring.hpp"
#include "rnspim/rns.hpp"

namespace {

using namespace rnspim;
using oracle::Big;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<std::uint32_t> random_residues(std::mt19937_64& rng, std::size_t n,
                                           std::uint32_t p) {
  std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Big random_below(std::mt19937_64& rng, const Big& bound) {
  Big x = 0;
  for (unsigned bits = 0; bits < msb(bound) + 65; bits += 64) x = (x << 64) | rng();
  return x % bound;
}

// 1. iNTT(NTT(a)) == a for every n and every modulus of the default base.
Outcome ntt_round_trip() {
  std::mt19937_64 rng(101);
  std::size_t checked = 0;
  for (std::size_t n = 8; n <= 8192; n *= 2) {
    const RnsBase base = build_base(n, default_coefficient_bits(n));
    for (std::size_t i = 0; i < base.size(); ++i) {
      const auto table = build_twiddles(base.modulus(i), n, i);
      for (int t = 0; t < 100; ++t) {
        const auto a = random_residues(rng, n, base.modulus(i).value());
        auto b = a;
        ntt_forward_inplace(b, table);
        ntt_inverse_inplace(b, table);
        if (a != b) {
          return {false, "mismatch at n=" + std::to_string(n) + " modulus " +
                             std::to_string(i)};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " polynomials"};
}

// 2. iNTT(NTT(A) o NTT(B)) equals a direct negacyclic product.
Outcome convolution() {
  std::mt19937_64 rng(202);
  for (std::size_t n = 2; n <= 256; n *= 2) {
    const RnsBase base = build_base(n, default_coefficient_bits(n));
    const auto& m = base.modulus(0);
    const std::uint64_t p = m.value();
    const auto table = build_twiddles(m, n);
    for (int t = 0; t < 200; ++t) {
      auto a = random_residues(rng, n, m.value());
      auto b = random_residues(rng, n, m.value());
      std::vector<std::uint64_t> expected(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const std::uint64_t prod = std::uint64_t{a[i]} * b[j] % p;
          const std::size_t k = (i + j) % n;
          expected[k] = i + j < n ? (expected[k] + prod) % p
                                  : (expected[k] + p - prod) % p;
        }
      }
      ntt_forward_inplace(a, table);
      ntt_forward_inplace(b, table);
      for (std::size_t j = 0; j < n; ++j) a[j] = mod_mul(a[j], b[j], m);
      ntt_inverse_inplace(a, table);
      for (std::size_t j = 0; j < n; ++j) {
        if (a[j] != expected[j]) {
          return {false, "mismatch at n=" + std::to_string(n)};
        }
      }
    }
  }
  return {true, "200 pairs for each n in 2..256"};
}

// 3. Forward output at n = 8 lists t0,t4,t2,t6,t1,t5,t3,t7 with
// t_k = A(psi^(2k+1)).
Outcome butterfly_order() {
  const RnsBase base = build_base(8, 30);
  const auto table = build_twiddles(base.modulus(0), 8);
  const std::uint64_t p = base.modulus(0).value();
  std::mt19937_64 rng(303);
  const auto a = random_residues(rng, 8, base.modulus(0).value());
  auto out = a;
  ntt_forward_inplace(out, table);
  const std::size_t order[] = {0, 4, 2, 6, 1, 5, 3, 7};
  for (std::size_t j = 0; j < 8; ++j) {
    const auto point = oracle::powmod(table.psi, 2 * order[j] + 1, p);
    if (out[j] != oracle::evaluate(a, point, p)) {
      return {false, "slot " + std::to_string(j) + " is not t" +
                         std::to_string(order[j])};
    }
  }
  return {true, "t0 t4 t2 t6 t1 t5 t3 t7"};
}

// 4. Barrett reduction against % on generated NTT primes.
Outcome barrett() {
  std::vector<ResidueModulus> primes;
  for (std::size_t n = 2; n <= 8192; n *= 2) {
    for (unsigned bits : {20u, 27u, 30u, 31u, 32u}) {
      try {
        primes.push_back(find_ntt_prime(n, bits));
      } catch (const ExhaustionError&) {
        // Narrow ranges may hold no prime == 1 (mod 2n).
      }
    }
  }
  std::mt19937_64 rng(404);
  for (int t = 0; t < 1000000; ++t) {
    const auto& m = primes[rng() % primes.size()];
    const std::uint64_t p = m.value();
    const std::uint64_t v =
        std::uniform_int_distribution<std::uint64_t>(0, p * p - 1)(rng);
    if (barrett_reduce(v, m) != v % p) {
      return {false, "v=" + std::to_string(v) + " p=" + std::to_string(p)};
    }
  }
  const ResidueModulus small(17, 16);
  for (std::uint64_t v = 0; v < 17 * 17; ++v) {
    if (barrett_reduce(v, small) != v % 17) {
      return {false, "p=17 v=" + std::to_string(v)};
    }
  }
  return {true, "1e6 random over " + std::to_string(primes.size()) +
                    " primes, exhaustive p=17"};
}

// 5. decompose/reconstruct identity and ring homomorphism.
Outcome crt() {
  std::mt19937_64 rng(505);
  for (unsigned bits : {27u, 54u, 109u, 218u}) {
    const RnsBase base = build_base(8192, bits);
    const Big& M = base.product();
    for (int t = 0; t < 100000; ++t) {
      const Big x = random_below(rng, M), y = random_below(rng, M);
      const auto xr = decompose(x, base), yr = decompose(y, base);
      if (reconstruct(xr, base) != x) {
        return {false, "identity at " + std::to_string(bits) + " bits"};
      }
      std::vector<std::uint32_t> sum(base.size()), prod(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        sum[i] = mod_add(xr[i], yr[i], base.modulus(i));
        prod[i] = mod_mul(xr[i], yr[i], base.modulus(i));
      }
      if (reconstruct(sum, base) != (x + y) % M ||
          reconstruct(prod, base) != (x * y) % M) {
        return {false, "homomorphism at " + std::to_string(bits) + " bits"};
      }
    }
  }
  return {true, "1e5 values for each of 27/54/109/218 bits"};
}

// 6. BGV product lifted through CRT equals big-integer ring products.
Outcome bgv() {
  std::mt19937_64 rng(606);
  int pairs = 0;
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    auto base = std::make_shared<const RnsBase>(build_base(n, 109));
    const NttContext ntt(base, n);
    const Big& q = base->product();
    for (int t = 0; t < 100; ++t) {
      const auto rand = [&] {
        return random_polynomial(base, n, Domain::kCoefficient, rng);
      };
      const Ciphertext a{rand(), rand()}, b{rand(), rand()};
      const auto got = pipeline_multiply(a, b, ntt);
      const auto a0 = a.c0.lift(), a1 = a.c1.lift();
      const auto b0 = b.c0.lift(), b1 = b.c1.lift();
      const auto c0 = oracle::negacyclic_mul(a0, b0, q);
      const auto c1 = oracle::add_mod(oracle::negacyclic_mul(a0, b1, q),
                                      oracle::negacyclic_mul(a1, b0, q), q);
      const auto c2 = oracle::negacyclic_mul(a1, b1, q);
      if (got.c0.lift() != c0 || got.c1.lift() != c1 || got.c2.lift() != c2) {
        return {false, "mismatch at n=" + std::to_string(n)};
      }
      ++pairs;
    }
  }
  return {true, std::to_string(pairs) + " pairs, n in 8..64, 109-bit q"};
}

// 7. Sub-polynomials per DPU.
Outcome capacity_figures() {
  const pimsim::DpuModel model;
  const auto c4096 = pimsim::capacity(4096, model);
  const auto c8192 = pimsim::capacity(8192, model);
  const double rel = std::abs(static_cast<double>(c4096) - 3750.0) / 3750.0;
  const auto half = static_cast<std::int64_t>(c4096) / 2;
  const bool ok = rel <= 0.05 && std::llabs(static_cast<std::int64_t>(c8192) - half) <= 1;
  return {ok, "capacity(4096)=" + std::to_string(c4096) +
                  " capacity(8192)=" + std::to_string(c8192)};
}

// 8. NTT compute-cycle ratios default/dummy and dummy/optimistic.
Outcome speedup_shape() {
  const pimsim::DpuModel model;
  const auto def = pimsim::CostTable::preset("default");
  const auto dummy = pimsim::CostTable::preset("dummy");
  const auto opt = pimsim::CostTable::preset("optimistic");
  Outcome out;
  for (std::size_t n = 1024; n <= 8192; n *= 2) {
    for (std::uint64_t items : {1u, 11u, 64u}) {
      const auto cycles = [&](const pimsim::CostTable& c) {
        return static_cast<double>(pimsim::kernel_cost(pimsim::KernelKind::kNtt, n,
                                                       items,
                                                       Threading::kCoarseGrained, c,
                                                       model)
                                       .compute_cycles);
      };
      const double r1 = cycles(def) / cycles(dummy);
      const double r2 = cycles(dummy) / cycles(opt);
      if (!(r1 >= 2.2 && r1 <= 3.2 && r2 >= 1.4 && r2 <= 2.2)) out.pass = false;
      if (n == 4096 && items == 11) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "n=4096: default/dummy %.2f, dummy/optimistic %.2f",
                      r1, r2);
        out.detail = buf;
      }
    }
  }
  if (!out.pass) out.detail += " (a ratio left its band)";
  return out;
}

// 9. Flat-then-linear makespan over a ciphertext sweep at 128 DPUs.
Outcome saturation_knee() {
  bench::Scenario s;
  s.n = 2048;
  s.config.platform = pimsim::PlatformModel::with_dpus(128);
  std::vector<std::uint64_t> flat_c, linear_c, grid;
  for (std::uint64_t c = 1; c <= 256; c *= 2) flat_c.push_back(c);
  for (std::uint64_t c = 384; c <= 1024; c += 64) linear_c.push_back(c);
  for (std::uint64_t c = 64; c <= 1024; c += 32) grid.push_back(c);

  const auto makespans = [&](const std::vector<std::uint64_t>& cs) {
    std::vector<double> out;
    for (const auto& row : bench::run_sweep(s, bench::SweepAxis::kCiphertexts, cs)) {
      out.push_back(static_cast<double>(row.makespan_cycles));
    }
    return out;
  };
  const auto flat = makespans(flat_c);
  double lo = flat[0], hi = flat[0], mean = 0;
  for (double v : flat) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v / static_cast<double>(flat.size());
  }
  const double spread = (hi - lo) / mean;

  const auto lin = makespans(linear_c);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(lin.size());
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const double x = static_cast<double>(linear_c[i]);
    sx += x;
    sy += lin[i];
    sxx += x * x;
    sxy += x * lin[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double icept = (sy - slope * sx) / k;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const double fit = icept + slope * static_cast<double>(linear_c[i]);
    ss_res += (lin[i] - fit) * (lin[i] - fit);
    ss_tot += (lin[i] - sy / k) * (lin[i] - sy / k);
  }
  const double r2 = 1.0 - ss_res / ss_tot;

  // Knee: first grid point more than 5% above the flat level.
  const auto sweep = bench::run_sweep(s, bench::SweepAxis::kCiphertexts, grid);
  std::uint64_t knee = 0;
  std::uint32_t knee_active = 0;
  for (const auto& row : sweep) {
    if (static_cast<double>(row.makespan_cycles) > 1.05 * mean) {
      knee = row.axis_value;
      knee_active = row.active_dpus;
      break;
    }
  }
  const bool ok = spread < 0.05 && r2 > 0.99 && knee > 256 && knee <= 512 &&
                  knee_active == s.config.platform.usable_dpus();
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "flat spread %.4f, linear R^2 %.5f, knee at %llu ciphertexts "
                "with %u/%u DPUs active",
                spread, r2, static_cast<unsigned long long>(knee), knee_active,
                s.config.platform.usable_dpus());
  return {ok, buf};
}

// Library-side interpreter for one interface command on a single modulus.
void reference_step(const iface::Command& cmd,
                    std::vector<RnsPolynomial>& slots, const NttContext& ntt) {
  using iface::Opcode;
  auto as = [](RnsPolynomial p, Domain d) {
    p.set_domain(d);
    return p;
  };
  auto store = [&](std::uint64_t i, RnsPolynomial p) {
    p.set_domain(Domain::kCoefficient);
    slots[i] = std::move(p);
  };
  const auto ntt_d = Domain::kNttBitReversed;
  switch (cmd.op) {
    case Opcode::kNttFwd:
      store(cmd.dst, ntt.forward(as(slots[cmd.src1], Domain::kCoefficient)));
      break;
    case Opcode::kNttInv:
      store(cmd.dst, ntt.inverse(as(slots[cmd.src1], ntt_d)));
      break;
    case Opcode::kPointwiseMul:
      store(cmd.dst, pointwise_mul(as(slots[cmd.src1], ntt_d),
                                   as(slots[cmd.src2], ntt_d)));
      break;
    case Opcode::kPointwiseAdd:
      store(cmd.dst, pointwise_add(slots[cmd.src1], slots[cmd.src2]));
      break;
    case Opcode::kBgvMul: {
      const Ciphertext a{as(slots[cmd.src1], ntt_d), as(slots[cmd.src1 + 1], ntt_d)};
      const Ciphertext b{as(slots[cmd.src2], ntt_d), as(slots[cmd.src2 + 1], ntt_d)};
      auto prod = bgv_multiply(a, b);
      store(cmd.dst, std::move(prod.c0));
      store(cmd.dst + 1, std::move(prod.c1));
      store(cmd.dst + 2, std::move(prod.c2));
      break;
    }
  }
}

// 10. Codec round-trips, fuzzing and execution against the library.
Outcome interface_codec() {
  std::mt19937_64 rng(1010);
  const auto uni = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  const auto random_image = [&](std::size_t n, std::size_t ncmd, std::size_t nsub,
                                bool gaps) {
    const auto table = build_twiddles(build_base(n, 30).modulus(0), n);
    std::vector<iface::Command> cmds;
    for (std::size_t i = 0; i < ncmd; ++i) {
      const auto op = static_cast<iface::Opcode>(uni(1, 5));
      const auto pick = [&] { return uni(0, nsub == 0 ? 3 : nsub + 2); };
      cmds.push_back(iface::is_unary(op) ? iface::Command::unary(op, pick(), pick())
                                         : iface::Command::binary(op, pick(), pick(),
                                                                  pick()));
    }
    std::vector<std::vector<std::uint32_t>> polys;
    for (std::size_t i = 0; i < nsub; ++i) {
      polys.push_back(random_residues(rng, n, table.modulus.value()));
    }
    auto o = iface::packed_offsets(n, ncmd);
    if (gaps) {
      o.twiddles = 2 * uni(0, 4);
      o.commands = o.twiddles + 2 * n + 2 * uni(0, 4);
      o.subpolys = o.commands + 8 * ncmd + 2 * uni(0, 4);
    }
    return iface::encode_image(table, cmds, polys, {}, o);
  };

  for (int t = 0; t < 1000; ++t) {
    const auto bytes = random_image(std::size_t{1} << uni(1, 9), uni(0, 8),
                                    uni(0, 6), t % 2 == 1);
    const auto decoded = iface::decode_image(bytes);
    if (iface::encode_image(decoded) != bytes) {
      return {false, "round-trip " + std::to_string(t) + " not byte-exact"};
    }
  }

  int accepted = 0;
  for (int t = 0; t < 100000; ++t) {
    std::vector<std::uint8_t> b;
    if (t % 2 == 0) {
      b.resize(uni(0, 400));
      for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    } else {
      b = random_image(std::size_t{1} << uni(1, 4), uni(0, 3), uni(0, 3), false);
      for (auto flips = uni(1, 4); flips > 0; --flips) {
        b[uni(0, b.size() - 1)] ^= static_cast<std::uint8_t>(1u << uni(0, 7));
      }
      if (uni(0, 3) == 0) b.resize(uni(0, b.size()));
    }
    try {
      const auto c = iface::decode_image(b);
      ++accepted;
      if (iface::encode_image(c) != b) {
        return {false, "fuzz buffer " + std::to_string(t) + " re-encoded differently"};
      }
    } catch (const ParseError&) {
    } catch (const std::exception& e) {
      return {false, "fuzz buffer " + std::to_string(t) + " raised " + e.what()};
    }
  }

  for (int t = 0; t < 50; ++t) {
    const std::size_t n = std::size_t{1} << uni(2, 7);
    const std::size_t nsub = uni(5, 9);
    auto base = std::make_shared<const RnsBase>(build_base(n, 30));
    const NttContext ntt(base, n);
    std::vector<RnsPolynomial> slots;
    std::vector<std::vector<std::uint32_t>> polys;
    for (std::size_t i = 0; i < nsub; ++i) {
      slots.push_back(random_polynomial(base, n, Domain::kCoefficient, rng));
      polys.emplace_back(slots.back().sub(0).begin(), slots.back().sub(0).end());
    }
    std::vector<iface::Command> program;
    for (auto len = uni(1, 12); len > 0; --len) {
      const auto op = static_cast<iface::Opcode>(uni(1, 5));
      if (op == iface::Opcode::kBgvMul) {
        program.push_back(iface::Command::binary(op, uni(0, nsub - 2), uni(0, nsub - 2),
                                                 uni(0, nsub - 3)));
      } else if (iface::is_unary(op)) {
        program.push_back(iface::Command::unary(op, uni(0, nsub - 1), uni(0, nsub - 1)));
      } else {
        program.push_back(iface::Command::binary(op, uni(0, nsub - 1), uni(0, nsub - 1),
                                                 uni(0, nsub - 1)));
      }
    }
    for (const auto& cmd : program) reference_step(cmd, slots, ntt);
    const auto out = iface::decode_image(
        iface::execute_image(iface::encode_image(ntt.table(0), program, polys)));
    for (std::size_t i = 0; i < nsub; ++i) {
      const auto want = slots[i].sub(0);
      if (!std::equal(want.begin(), want.end(), out.subpoly(i).begin())) {
        return {false, "program " + std::to_string(t) + " differs at slot " +
                           std::to_string(i)};
      }
    }
  }
  return {true, "1000 round-trips, 1e5 fuzz buffers (" + std::to_string(accepted) +
                    " accepted), 50 programs"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"ntt round-trip", ntt_round_trip},
      {"convolution theorem", convolution},
      {"butterfly order", butterfly_order},
      {"barrett reduction", barrett},
      {"crt round-trip and homomorphism", crt},
      {"bgv oracle", bgv},
      {"capacity figures", capacity_figures},
      {"simulator speed-up shape", speedup_shape},
      {"saturation knee", saturation_knee},
      {"interface codec", interface_codec},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
    ++index;
  }
  return failures == 0 ? 0 : 1;
}
