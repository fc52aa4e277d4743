// Copyright 2026 The rnspim Authors
// SPDX-License-Identifier: Apache-2.0

// Python bindings. Big integers cross the boundary as Python ints via
// their decimal strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "rnspim/bench.hpp"
#include "rnspim/bgv.hpp"
#include "rnspim/errors.hpp"
#include "rnspim/modarith.hpp"
#include "rnspim/ntt.hpp"
#include "rnspim/pimiface.hpp"
#include "rnspim/pimsim.hpp"
#include "rnspim/polyring.hpp"
#include "rnspim/rns.hpp"

namespace py = pybind11;
using namespace rnspim;

namespace {

py::int_ to_py(const BigInt& x) {
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(x.str().c_str(), nullptr, 10));
}

BigInt from_py(const py::int_& x) {
  return BigInt(py::str(py::handle(x)).cast<std::string>());
}

std::vector<py::int_> lift_to_py(const RnsPolynomial& p) {
  std::vector<py::int_> out;
  for (const auto& c : p.lift()) out.push_back(to_py(c));
  return out;
}

RnsPolynomial poly_from_py(const std::shared_ptr<const RnsBase>& base,
                           const std::vector<py::int_>& coeffs) {
  std::vector<BigInt> big;
  big.reserve(coeffs.size());
  for (const auto& c : coeffs) big.push_back(from_py(c));
  return RnsPolynomial::from_coefficients(base, big);
}

py::dict row_to_dict(const bench::SweepRow& r) {
  py::dict d;
  d["n"] = r.n;
  d["bits"] = r.bits;
  d["k"] = r.num_moduli;
  d["ciphertexts"] = r.ciphertexts;
  d["dpus"] = r.dpus;
  d["strategy"] = r.strategy;
  d["preset"] = r.preset;
  d["active_dpus"] = r.active_dpus;
  d["imbalanced"] = r.imbalanced;
  d["makespan_cycles"] = r.makespan_cycles;
  d["compute_s"] = r.compute_seconds;
  d["transfer_s"] = r.transfer_seconds;
  d["retrieval_s"] = r.retrieval_seconds;
  d["total_s"] = r.total_seconds;
  d["error"] = r.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "RNS polynomial arithmetic, NTT, BGV multiplication and a PIM cost model";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ExhaustionError>(m, "ExhaustionError", PyExc_RuntimeError);
  py::register_exception<PlanningError>(m, "PlanningError", PyExc_RuntimeError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ExecutionError>(m, "ExecutionError", PyExc_RuntimeError);

  py::class_<ResidueModulus>(m, "ResidueModulus")
      .def(py::init<std::uint32_t, std::uint64_t>(), py::arg("p"), py::arg("two_n"))
      .def_property_readonly("value", &ResidueModulus::value)
      .def_property_readonly("barrett_factor", &ResidueModulus::barrett_factor)
      .def_property_readonly("two_n", &ResidueModulus::two_n)
      .def("__repr__", [](const ResidueModulus& r) {
        return "ResidueModulus(" + std::to_string(r.value()) + ", " +
               std::to_string(r.two_n()) + ")";
      });

  m.def("barrett_reduce", &barrett_reduce, py::arg("v"), py::arg("modulus"));
  m.def("mod_mul", &mod_mul, py::arg("a"), py::arg("b"), py::arg("modulus"));
  m.def("is_prime", &is_prime_u32, py::arg("x"));
  m.def("find_ntt_prime", &find_ntt_prime, py::arg("n"), py::arg("bits"),
        py::arg("skip") = 0);

  py::class_<RnsBase, std::shared_ptr<RnsBase>>(m, "RnsBase")
      .def_property_readonly("moduli",
                             [](const RnsBase& b) {
                               std::vector<std::uint32_t> out;
                               for (const auto& x : b.moduli()) out.push_back(x.value());
                               return out;
                             })
      .def_property_readonly("product", [](const RnsBase& b) { return to_py(b.product()); })
      .def("__len__", &RnsBase::size)
      .def("decompose",
           [](const RnsBase& b, const py::int_& x) { return decompose(from_py(x), b); })
      .def("reconstruct", [](const RnsBase& b, const std::vector<std::uint32_t>& r) {
        return to_py(reconstruct(r, b));
      });
  m.def("build_base",
        [](std::size_t n, unsigned bits) {
          return std::make_shared<RnsBase>(
              build_base(n, bits != 0 ? bits : default_coefficient_bits(n)));
        },
        py::arg("n"), py::arg("bits") = 0);
  m.def("default_coefficient_bits", &default_coefficient_bits, py::arg("n"));

  py::class_<TwiddleTable>(m, "TwiddleTable")
      .def_readonly("n", &TwiddleTable::n)
      .def_readonly("psi", &TwiddleTable::psi)
      .def_readonly("n_inv", &TwiddleTable::n_inv)
      .def_readonly("forward", &TwiddleTable::forward)
      .def_readonly("inverse_scrambled", &TwiddleTable::inverse_scrambled)
      .def_property_readonly("modulus", [](const TwiddleTable& t) { return t.modulus.value(); });
  m.def("build_twiddles",
        [](std::uint32_t p, std::size_t n) {
          return build_twiddles(ResidueModulus(p, 2 * static_cast<std::uint64_t>(n)), n);
        },
        py::arg("p"), py::arg("n"));
  m.def("ntt_forward",
        [](std::vector<std::uint32_t> a, const TwiddleTable& t) {
          if (a.size() != t.n) throw DomainError("length does not match the table");
          ntt_forward_inplace(a, t);
          return a;
        },
        py::arg("coeffs"), py::arg("table"));
  m.def("ntt_inverse",
        [](std::vector<std::uint32_t> a, const TwiddleTable& t) {
          if (a.size() != t.n) throw DomainError("length does not match the table");
          ntt_inverse_inplace(a, t);
          return a;
        },
        py::arg("values"), py::arg("table"));
  m.def("negacyclic_mul",
        [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
           std::uint32_t p) {
          const ResidueModulus mod(p, 2);
          return schoolbook_negacyclic_mul({a, 0, Domain::kCoefficient},
                                           {b, 0, Domain::kCoefficient}, mod)
              .coeffs;
        },
        py::arg("a"), py::arg("b"), py::arg("p"));

  m.def("bgv_multiply",
        [](const std::vector<py::int_>& a0, const std::vector<py::int_>& a1,
           const std::vector<py::int_>& b0, const std::vector<py::int_>& b1,
           unsigned bits) {
          const std::size_t n = a0.size();
          auto base = std::make_shared<const RnsBase>(
              build_base(n, bits != 0 ? bits : default_coefficient_bits(n)));
          const NttContext ntt(base, n);
          const Ciphertext a{poly_from_py(base, a0), poly_from_py(base, a1)};
          const Ciphertext b{poly_from_py(base, b0), poly_from_py(base, b1)};
          const auto r = pipeline_multiply(a, b, ntt);
          return py::make_tuple(lift_to_py(r.c0), lift_to_py(r.c1), lift_to_py(r.c2));
        },
        py::arg("a0"), py::arg("a1"), py::arg("b0"), py::arg("b1"), py::arg("bits") = 0,
        "Coefficients in [0, q); q is the product of build_base(n, bits).");

  m.def("capacity",
        [](std::size_t n) { return pimsim::capacity(n, pimsim::DpuModel{}); },
        py::arg("n"));
  m.def("simulate",
        [](std::size_t n, unsigned bits, std::uint32_t ciphertexts, std::uint32_t dpus,
           const std::string& phases, const std::string& preset,
           const std::string& strategy) {
          bench::Scenario s;
          s.n = n;
          s.bits = bits;
          s.ciphertexts = ciphertexts;
          s.phases = pimsim::parse_phases(phases);
          s.preset = preset;
          (void)pimsim::CostTable::preset(preset);
          if (dpus != 0) s.config.platform = pimsim::PlatformModel::with_dpus(dpus);
          if (strategy == "parallel") {
            s.strategy = pimsim::Strategy::kModulusParallel;
          } else if (strategy == "sequential") {
            s.strategy = pimsim::Strategy::kModulusSequential;
          } else if (strategy != "auto") {
            throw ConfigError("unknown strategy '" + strategy + "'");
          }
          return row_to_dict(bench::run_point(s));
        },
        py::arg("n") = 4096, py::arg("bits") = 0, py::arg("ciphertexts") = 1,
        py::arg("dpus") = 0, py::arg("phases") = "ntt", py::arg("preset") = "default",
        py::arg("strategy") = "auto");

  m.def("verify",
        [](std::size_t n, unsigned bits, std::uint32_t trials, std::uint64_t seed) {
          bench::VerifyOptions o;
          o.n = n;
          o.bits = bits;
          o.trials = trials;
          o.seed = seed;
          const auto r = bench::run_verify(o);
          return py::make_tuple(r.passed, r.lines);
        },
        py::arg("n") = 1024, py::arg("bits") = 0, py::arg("trials") = 10,
        py::arg("seed") = 1);

  using iface::Opcode;
  m.def("encode_image",
        [](const TwiddleTable& t,
           const std::vector<std::tuple<std::string, std::uint64_t, std::int64_t,
                                        std::uint64_t>>& commands,
           const std::vector<std::vector<std::uint32_t>>& subpolys) {
          std::vector<iface::Command> cmds;
          for (const auto& [name, src1, src2, dst] : commands) {
            Opcode op{};
            bool found = false;
            for (auto o : {Opcode::kNttFwd, Opcode::kNttInv, Opcode::kPointwiseMul,
                           Opcode::kPointwiseAdd, Opcode::kBgvMul}) {
              if (name == iface::to_string(o)) {
                op = o;
                found = true;
              }
            }
            if (!found) throw DomainError("unknown opcode '" + name + "'");
            cmds.push_back({op, src1,
                            src2 < 0 ? iface::kUnusedOperand
                                     : static_cast<std::uint64_t>(src2),
                            dst});
          }
          const auto bytes = iface::encode_image(t, cmds, subpolys);
          return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("table"), py::arg("commands"), py::arg("subpolys"),
        "commands: (opcode name, src1, src2 or -1, dst) tuples.");
  m.def("decode_image", [](const py::bytes& data) {
    const std::string s = data;
    const auto c = iface::decode_image(
        std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    py::dict d;
    d["n"] = c.header.poly_len;
    d["modulus"] = c.header.modulus;
    d["n_inv"] = c.header.n_inv;
    py::list cmds;
    for (const auto& cmd : c.commands) {
      cmds.append(py::make_tuple(
          iface::to_string(cmd.op), cmd.src1,
          cmd.src2 == iface::kUnusedOperand ? std::int64_t{-1}
                                            : static_cast<std::int64_t>(cmd.src2),
          cmd.dst));
    }
    d["commands"] = cmds;
    std::vector<std::vector<std::uint32_t>> subs;
    for (std::size_t i = 0; i < c.header.num_subpolys; ++i) {
      const auto sp = c.subpoly(i);
      subs.emplace_back(sp.begin(), sp.end());
    }
    d["subpolys"] = subs;
    return d;
  });
  m.def("execute_image", [](const py::bytes& data) {
    const std::string s = data;
    const auto out = iface::execute_image(
        std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
  });
  m.def("hex_dump", [](const py::bytes& data) {
    const std::string s = data;
    return iface::hex_dump(
        std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  });
}
