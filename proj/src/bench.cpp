// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

#include "rnspim/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <random>
#include <sstream>

#include "rnspim/errors.hpp"
#include "rnspim/ntt.hpp"
#include "rnspim/rns.hpp"

namespace rnspim::bench {

namespace {

using pimsim::CostTable;
using pimsim::Strategy;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CostTable cost_for(const Scenario& s) {
  const CostTable preset = CostTable::preset(s.preset);
  CostTable cost = s.config.cost;
  cost.routine = preset.routine;
  if (s.preset == "native134") cost.mul64_native = preset.mul64_native;
  return cost;
}

std::uint32_t random_residue(std::mt19937_64& rng, std::uint32_t p) {
  return std::uniform_int_distribution<std::uint32_t>(0, p - 1)(rng);
}

std::vector<std::uint32_t> random_residues(std::mt19937_64& rng,
                                           std::size_t n, std::uint32_t p) {
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = random_residue(rng, p);
  return v;
}

}  // namespace

unsigned Scenario::effective_bits() const {
  return bits != 0 ? bits : default_coefficient_bits(n);
}

std::vector<std::string> Scenario::warnings() const {
  std::vector<std::string> out;
  if (n != 1024 && n != 2048 && n != 4096 && n != 8192) {
    out.push_back("n = " + std::to_string(n) +
                  " is outside the standard set {1024, 2048, 4096, 8192}");
  }
  return out;
}

Strategy auto_strategy(const pimsim::PlatformModel& platform,
                       std::size_t num_moduli) {
  return num_moduli != 0 && platform.ranks % num_moduli == 0
             ? Strategy::kModulusParallel
             : Strategy::kModulusSequential;
}

std::string format_params(std::size_t n, unsigned bits) {
  if (bits == 0) bits = default_coefficient_bits(n);
  const RnsBase base = build_base(n, bits);
  std::ostringstream out;
  out << "n = " << n << ", coefficient bits = " << bits << ", k = "
      << base.size() << "\n";
  out << "M = " << base.product() << " (" << msb(base.product()) + 1
      << " bits)\n";
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto table = build_twiddles(base.modulus(i), n, i);
    out << "m" << i << " = " << base.modulus(i).value()
        << "  barrett = " << base.modulus(i).barrett_factor()
        << "  psi = " << table.psi << "  n_inv = " << table.n_inv << "\n";
  }
  out << "# config\n" << base_to_config(base);
  return out.str();
}

VerifyResult run_verify(const VerifyOptions& o) {
  VerifyResult result;
  const unsigned bits = o.bits != 0 ? o.bits : default_coefficient_bits(o.n);
  const RnsBase base = build_base(o.n, bits);
  if (o.trials == 0) {
    result.lines.push_back("warning: trials = 0, nothing checked");
    return result;
  }

  std::vector<TwiddleTable> tables;
  for (std::size_t i = 0; i < base.size(); ++i) {
    tables.push_back(build_twiddles(base.modulus(i), o.n, i));
  }
  if (o.corrupt_twiddle) {
    auto& t = tables.front();
    t.forward[1] = mod_add(t.forward[1], 1, t.modulus);
  }

  auto record = [&](const char* invariant, std::uint64_t seed) {
    if (result.passed) {
      result.passed = false;
      result.failing_seed = seed;
      result.failed_invariant = invariant;
    }
  };
  auto suite = [&](const char* name, auto&& check) {
    std::uint32_t failures = 0;
    for (std::uint32_t t = 0; t < o.trials; ++t) {
      const std::uint64_t seed = o.seed + t;
      std::mt19937_64 rng(seed);
      if (!check(rng)) {
        if (failures == 0) record(name, seed);
        ++failures;
      }
    }
    result.lines.push_back(std::string(failures == 0 ? "PASS " : "FAIL ") +
                           name + ": " +
                           std::to_string(o.trials - failures) + "/" +
                           std::to_string(o.trials));
  };

  suite("ntt round-trip", [&](std::mt19937_64& rng) {
    for (const auto& t : tables) {
      const auto a = random_residues(rng, o.n, t.modulus.value());
      auto b = a;
      ntt_forward_inplace(b, t);
      ntt_inverse_inplace(b, t);
      if (a != b) return false;
    }
    return true;
  });

  suite("convolution", [&](std::mt19937_64& rng) {
    for (const auto& t : tables) {
      const std::uint32_t p = t.modulus.value();
      SubPolynomial a{random_residues(rng, o.n, p), t.modulus_index,
                      Domain::kCoefficient};
      SubPolynomial b{random_residues(rng, o.n, p), t.modulus_index,
                      Domain::kCoefficient};
      const auto expected = schoolbook_negacyclic_mul(a, b, t.modulus);
      auto fa = a.coeffs, fb = b.coeffs;
      ntt_forward_inplace(fa, t);
      ntt_forward_inplace(fb, t);
      for (std::size_t j = 0; j < o.n; ++j) fa[j] = mod_mul(fa[j], fb[j], t.modulus);
      ntt_inverse_inplace(fa, t);
      if (fa != expected.coeffs) return false;
    }
    return true;
  });

  suite("crt homomorphism", [&](std::mt19937_64& rng) {
    std::vector<std::uint32_t> xr(base.size()), yr(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      xr[i] = random_residue(rng, base.modulus(i).value());
      yr[i] = random_residue(rng, base.modulus(i).value());
    }
    const BigInt x = reconstruct(xr, base);
    const BigInt y = reconstruct(yr, base);
    if (decompose(x, base) != xr) return false;
    std::vector<std::uint32_t> sum(base.size()), prod(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      sum[i] = mod_add(xr[i], yr[i], base.modulus(i));
      prod[i] = mod_mul(xr[i], yr[i], base.modulus(i));
    }
    const BigInt& M = base.product();
    return reconstruct(sum, base) == (x + y) % M &&
           reconstruct(prod, base) == (x * y) % M;
  });

  if (!result.passed) {
    result.lines.push_back("first failure: " + result.failed_invariant +
                           " at seed " + std::to_string(*result.failing_seed));
  }
  return result;
}

const char* to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::kCiphertexts: return "ciphertexts";
    case SweepAxis::kDpus: return "dpus";
    case SweepAxis::kN: return "n";
  }
  return "unknown";
}

SweepAxis parse_axis(const std::string& name) {
  for (auto axis : {SweepAxis::kCiphertexts, SweepAxis::kDpus, SweepAxis::kN}) {
    if (name == to_string(axis)) return axis;
  }
  throw ConfigError("unknown sweep axis '" + name +
                    "' (expected ciphertexts, dpus, n)");
}

std::vector<std::uint64_t> default_axis_values(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kCiphertexts: {
      std::vector<std::uint64_t> v;
      for (unsigned e = 0; e <= 12; ++e) v.push_back(std::uint64_t{1} << e);
      return v;
    }
    case SweepAxis::kDpus: return {128, 192, 256, 383, 509};
    case SweepAxis::kN: return {1024, 2048, 4096, 8192};
  }
  return {};
}

SweepRow run_point(const Scenario& s) {
  SweepRow row;
  row.n = s.n;
  row.bits = s.effective_bits();
  row.ciphertexts = s.ciphertexts;
  row.dpus = s.config.platform.usable_dpus();
  row.ranks = s.config.platform.ranks;
  row.preset = s.preset;
  row.phases = pimsim::phases_to_string(s.phases);
  std::replace(row.phases.begin(), row.phases.end(), ',', '+');

  const CostTable cost = cost_for(s);
  row.bf_overhead = cost.per_butterfly_overhead;
  try {
    const RnsBase base = build_base(s.n, row.bits);
    row.num_moduli = base.size();
    const Strategy strategy =
        s.strategy.value_or(auto_strategy(s.config.platform, base.size()));
    row.strategy = pimsim::to_string(strategy);
    const auto plan =
        pimsim::plan_work(s.ciphertexts, static_cast<std::uint32_t>(base.size()),
                          s.config.platform, strategy);
    const auto report = pimsim::simulate(plan, s.phases, s.n, cost,
                                         s.config.dpu, s.config.platform);
    row.active_dpus = report.active_dpus;
    row.imbalanced = report.imbalanced;
    row.makespan_cycles = report.makespan_cycles;
    row.compute_seconds = report.compute_seconds;
    row.transfer_seconds = report.transfer_seconds;
    row.retrieval_seconds = report.retrieval_seconds;
    row.total_seconds = report.total_seconds();
  } catch (const PlanningError& e) {
    row.error = e.what();
  } catch (const CapacityError& e) {
    row.error = e.what();
  } catch (const ExhaustionError& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const Scenario& base, SweepAxis axis,
                                const std::vector<std::uint64_t>& values) {
  std::vector<Scenario> points;
  for (const auto v : values) {
    Scenario s = base;
    switch (axis) {
      case SweepAxis::kCiphertexts:
        s.ciphertexts = static_cast<std::uint32_t>(v);
        break;
      case SweepAxis::kDpus: {
        // Enough whole ranks for v DPUs; the remainder counts as defective.
        auto platform = base.config.platform;
        platform.ranks = static_cast<std::uint32_t>(
            (v + platform.dpus_per_rank - 1) / platform.dpus_per_rank);
        platform.defective_dpus =
            platform.ranks * platform.dpus_per_rank - static_cast<std::uint32_t>(v);
        s.config.platform = platform;
        break;
      }
      case SweepAxis::kN:
        if (!is_power_of_two(v)) {
          throw DomainError("sweep value n = " + std::to_string(v) +
                            " is not a power of two");
        }
        s.n = v;
        break;
    }
    points.push_back(std::move(s));
  }

  std::vector<std::future<SweepRow>> futures;
  for (const auto& s : points) {
    futures.push_back(std::async(std::launch::async, [&s] { return run_point(s); }));
  }
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    rows.push_back(futures[i].get());
    rows.back().axis_value = values[i];
  }
  return rows;
}

std::string csv_header() {
  return "axis_value,n,bits,k,ciphertexts,dpus,ranks,strategy,preset,phases,"
         "bf_overhead,active_dpus,imbalanced,makespan_cycles,compute_s,"
         "transfer_s,retrieval_s,total_s,error";
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kCsvVersionLine) + "\n" + csv_header() + "\n";
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    out += std::to_string(r.axis_value) + "," + std::to_string(r.n) + "," +
           std::to_string(r.bits) + "," + std::to_string(r.num_moduli) + "," +
           std::to_string(r.ciphertexts) + "," + std::to_string(r.dpus) + "," +
           std::to_string(r.ranks) + "," + r.strategy + "," + r.preset + "," +
           r.phases + "," + std::to_string(r.bf_overhead) + ",";
    if (ok) {
      out += std::to_string(r.active_dpus) + "," + (r.imbalanced ? "1" : "0") +
             "," + std::to_string(r.makespan_cycles) + "," +
             fmt_double(r.compute_seconds) + "," +
             fmt_double(r.transfer_seconds) + "," +
             fmt_double(r.retrieval_seconds) + "," +
             fmt_double(r.total_seconds) + ",";
    } else {
      out += ",,,,,,,";
    }
    out += csv_field(r.error) + "\n";
  }
  return out;
}

std::string to_svg(const std::vector<SweepRow>& rows, SweepAxis axis) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 20,
                   kBottom = 50;
  double y_max = 0;
  for (const auto& r : rows) y_max = std::max(y_max, r.total_seconds);
  if (y_max <= 0) y_max = 1;
  const std::size_t count = std::max<std::size_t>(rows.size(), 2);
  auto x_at = [&](std::size_t i) {
    return kLeft + (kW - kLeft - kRight) * static_cast<double>(i) /
                       static_cast<double>(count - 1);
  };
  auto y_at = [&](double v) {
    return kTop + (kH - kTop - kBottom) * (1.0 - v / y_max);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\""
      << kW - kRight << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">" << to_string(axis) << "</text>\n"
      << "<text x=\"" << kLeft - 5 << "\" y=\"" << kTop + 4
      << "\" text-anchor=\"end\">" << fmt_double(y_max) << " s</text>\n"
      << "<text x=\"" << kLeft - 5 << "\" y=\"" << kH - kBottom
      << "\" text-anchor=\"end\">0</text>\n";

  auto series = [&](const char* color, auto value) {
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].error.empty()) continue;
      svg << x_at(i) << "," << y_at(value(rows[i])) << " ";
    }
    svg << "\"/>\n";
  };
  series("steelblue", [](const SweepRow& r) { return r.compute_seconds; });
  series("firebrick", [](const SweepRow& r) { return r.total_seconds; });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool sequential = rows[i].strategy == "sequential";
    svg << "<text x=\"" << x_at(i) << "\" y=\"" << kH - kBottom + 15
        << "\" text-anchor=\"middle\"" << (sequential ? " font-weight=\"bold\"" : "")
        << ">" << rows[i].axis_value << "</text>\n";
  }
  svg << "<text x=\"" << kW - kRight << "\" y=\"" << kTop
      << "\" text-anchor=\"end\" fill=\"steelblue\">compute</text>\n"
      << "<text x=\"" << kW - kRight << "\" y=\"" << kTop + 14
      << "\" text-anchor=\"end\" fill=\"firebrick\">total</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace rnspim::bench
