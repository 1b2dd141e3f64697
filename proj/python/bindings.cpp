// Copyright 2026 The mbqc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mbqc_lab/cli.hpp"
#include "mbqc_lab/errors.hpp"
#include "mbqc_lab/io.hpp"
#include "mbqc_lab/pi2.hpp"
#include "mbqc_lab/reduction.hpp"
#include "mbqc_lab/universality.hpp"

namespace py = pybind11;
using namespace mbqc;

namespace {

py::object to_py(const io::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

io::json from_py(const py::object& o) {
  return io::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict report(const cli::Result& r) {
  py::dict d;
  d["exit_code"] = r.exit_code;
  d["report"] = to_py(r.report);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Measurement-based quantum computation lab";
  m.attr("__version__") = cli::version();

  py::register_exception<Error>(m, "Error");

  // ------------------------------------------------------------ quantum core
  py::class_<Ket>(m, "Ket")
      .def(py::init<int>(), py::arg("num_qubits") = 0)
      .def_static("from_amplitudes", [](const Vector& v) { return Ket::from_amplitudes(v); })
      .def_static("from_bits", &Ket::from_bits)
      .def_static("random", [](int n, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return Ket::random(n, rng);
      }, py::arg("num_qubits"), py::arg("seed") = 0)
      .def_property_readonly("num_qubits", &Ket::num_qubits)
      .def_property_readonly("amplitudes", [](const Ket& k) { return Vector(k.amplitudes()); })
      .def("norm", &Ket::norm)
      .def("__repr__", [](const Ket& k) { return "<Ket " + std::to_string(k.num_qubits()) + " qubits>"; });

  py::class_<Unitary2>(m, "Unitary2")
      .def(py::init<>())
      .def(py::init<const Matrix2&>())
      .def_static("equatorial", &Unitary2::equatorial)
      .def_static("hadamard", &Unitary2::hadamard)
      .def_static("pauli_x", &Unitary2::pauli_x)
      .def_static("pauli_z", &Unitary2::pauli_z)
      .def_property_readonly("matrix", [](const Unitary2& u) { return Matrix2(u.matrix()); });

  m.def("inner", &inner);
  m.def("circuit_unitary", [](const py::object& circuit) {
    return circuit_to_unitary(io::circuit_from_json(from_py(circuit)));
  }, "Dense unitary of a circuit given in the JSON gate-list format.");
  m.def("apply_circuit", [](const Ket& k, const py::object& circuit) {
    return apply_circuit(k, io::circuit_from_json(from_py(circuit)));
  });
  m.def("trace_distance", [](const Matrix& a, const Matrix& b) {
    return trace_distance(DensityOp::from_matrix(a), DensityOp::from_matrix(b));
  });
  m.def("trace_distance_to_pure", [](const std::vector<double>& w, const std::vector<Ket>& kets, const Ket& phi) {
    return trace_distance_to_pure(w, kets, phi);
  });
  m.def("partial_trace", [](const Ket& k, std::vector<int> keep) {
    return Matrix(partial_trace(k, std::move(keep)).matrix());
  });

  // ------------------------------------------------------------------ engine
  py::class_<ResourceState>(m, "ResourceState")
      .def(py::init<Ket, int>())
      .def_readonly("state", &ResourceState::state)
      .def_readonly("num_output", &ResourceState::num_output)
      .def_property_readonly("num_measured", &ResourceState::num_measured);

  py::class_<StrategyTable>(m, "StrategyTable")
      .def_static("from_json", [](const py::object& o) { return io::strategy_from_json(from_py(o)); })
      .def("to_json", [](const StrategyTable& t) { return to_py(io::to_json(t)); })
      .def_readonly("w", &StrategyTable::w);

  m.def("run_all_branches", [](const ResourceState& res, const StrategyTable& t, const BitString& y) {
    py::list out;
    for (const Branch& b : run_all_branches(res, t.to_strategy(), y).branches) {
      out.append(py::make_tuple(b.m, b.probability, b.post_state));
    }
    return out;
  }, "List of (outcomes, probability, output ket).");
  m.def("build_graph_state", &build_graph_state);
  m.def("cluster_resource", &cluster_resource);
  m.def("cluster_strategy_table", [](const std::vector<EulerAngles>& a) { return cluster_strategy_table(a); },
        py::arg("angles") = default_cluster_angles());
  m.def("default_cluster_angles", &default_cluster_angles);

  // ------------------------------------------------------------ universality
  py::class_<UnitaryFamily>(m, "UnitaryFamily")
      .def_static("from_json", [](const py::object& o) { return io::family_from_json(from_py(o)); })
      .def_readonly("w", &UnitaryFamily::w)
      .def_readonly("n", &UnitaryFamily::n)
      .def("target", &UnitaryFamily::target);
  m.def("cluster_family", [](const std::vector<EulerAngles>& a) { return cluster_family(a); },
        py::arg("angles") = default_cluster_angles());

  m.def("check_universality", [](const ResourceState& res, const StrategyTable& t, const UnitaryFamily& fam,
                                 double epsilon, int threads) {
    EvalOptions eo;
    eo.threads = threads;
    const Verdict v = check_universality(res, t.to_strategy(), fam, PrecisionParams::from_epsilon(epsilon), eo);
    py::dict d;
    d["verdict"] = to_string(v.kind);
    d["y"] = v.y;
    d["distance"] = v.distance;
    py::list rows;
    for (const YEvaluation& e : v.per_y) rows.append(py::make_tuple(e.y, e.distance, e.fidelity));
    d["per_y"] = rows;
    return d;
  }, py::arg("resource"), py::arg("strategy"), py::arg("family"), py::arg("epsilon"), py::arg("threads") = 1);

  m.def("optimize_product_overlap", [](const Ket& target, int restarts, std::uint64_t seed) {
    return optimize_product_overlap(target, restarts, seed).overlap_sq;
  }, py::arg("target"), py::arg("restarts") = 32, py::arg("seed") = 0);

  // --------------------------------------------------------------- reduction
  py::class_<VerifierCircuit>(m, "VerifierCircuit")
      .def_static("from_json", [](const py::object& o) { return io::verifier_from_json(from_py(o)); })
      .def("to_json", [](const VerifierCircuit& v) { return to_py(io::to_json(v)); })
      .def_readonly("w", &VerifierCircuit::w)
      .def_readonly("n", &VerifierCircuit::n)
      .def_readonly("name", &VerifierCircuit::name)
      .def_property_readonly("num_qubits", [](const VerifierCircuit& v) { return v.circuit.num_qubits; });
  m.def("equality_verifier", &equality_verifier);
  m.def("all_reject_verifier", &all_reject_verifier);
  m.def("rotation_verifier", &rotation_verifier);
  m.def("amplify_verifier", &amplify_verifier);
  m.def("acceptance_prob", &acceptance_prob);

  py::class_<BoundValues>(m, "BoundValues")
      .def_readonly("yes_branch_bound", &BoundValues::yes_branch_bound)
      .def_readonly("yes_fidelity_bound", &BoundValues::yes_fidelity_bound)
      .def_readonly("yes_distance_floor", &BoundValues::yes_distance_floor)
      .def_readonly("no_fidelity_sq_floor", &BoundValues::no_fidelity_sq_floor)
      .def_readonly("no_distance_ceiling", &BoundValues::no_distance_ceiling)
      .def_readonly("epsilon", &BoundValues::epsilon);
  m.def("bound_values", &bound_values, py::arg("p"), py::arg("r"), py::arg("t"),
        py::arg("check_parameters") = false);

  py::class_<ReductionBundle>(m, "ReductionBundle")
      .def_static("from_json", [](const py::object& o) { return io::bundle_from_json(from_py(o)); })
      .def("to_json", [](const ReductionBundle& b) { return to_py(io::to_json(b)); })
      .def_readonly("verifier", &ReductionBundle::verifier)
      .def_readonly("resource", &ReductionBundle::resource)
      .def_readonly("honest_strategy", &ReductionBundle::honest_strategy)
      .def("family", &ReductionBundle::family)
      .def_property_readonly("r", [](const ReductionBundle& b) { return b.params.r; })
      .def_property_readonly("t", [](const ReductionBundle& b) { return b.params.t; })
      .def_property_readonly("unitary_qubits", [](const ReductionBundle& b) { return b.U.num_qubits; });
  m.def("build_reduction", &build_reduction, py::arg("verifier"), py::arg("r"), py::arg("t"));

  m.def("strategy_search", [](const ReductionBundle& b, int seed) {
    OptimizerOptions oo;
    oo.seed = static_cast<std::uint64_t>(seed);
    const SearchResult r = strategy_search(b.resource, b.family(), StrategyDictionary::standard(),
                                           PrecisionParams::from_t(b.params.t), {}, oo);
    py::dict d;
    py::list rows;
    for (const YEvaluation& e : r.best_per_y) rows.append(py::make_tuple(e.y, e.distance, e.fidelity));
    d["per_y"] = rows;
    d["best_min_fidelity"] = r.best_min_fidelity;
    d["weakest_y"] = r.weakest_y;
    d["certified"] = r.non_universality_certified;
    d["log2_tables"] = r.log2_tables;
    return d;
  }, py::arg("bundle"), py::arg("seed") = 0,
     "Exhaustive search over the standard basis dictionary with optimized corrections.");

  // --------------------------------------------------------------------- pi2
  m.def("decide_qpi2", [](const ReductionBundle& b, double a, double bb, int threads) {
    QPi2Params params;
    params.a = a;
    params.b = bb;
    const Pi2Decision d = decide_qpi2(b.resource, b.family(), StrategyEncoding::standard(b.resource, b.params.w),
                                      params, threads);
    py::dict out;
    out["verdict"] = to_string(d.kind);
    out["lambda"] = d.lambda;
    out["decisive_code"] = d.decisive_code;
    return out;
  }, py::arg("bundle"), py::arg("a") = 0.75, py::arg("b") = 0.25, py::arg("threads") = 1);

  // --------------------------------------------------------------------- cli
  py::module_ cli_m = m.def_submodule("cli", "Subcommand entry points returning report dictionaries");
  cli_m.def("version", &cli::version);
  cli_m.def("reduce", [](const std::filesystem::path& verifier, int r, int t, const std::filesystem::path& out) {
    return report(cli::cmd_reduce(verifier, r, t, out, {}));
  });
  cli_m.def("check", [](const std::filesystem::path& bundle, std::optional<double> epsilon) {
    cli::CheckInputs in;
    in.bundle = bundle;
    return report(cli::cmd_check(in, epsilon, std::nullopt, {}));
  }, py::arg("bundle"), py::arg("epsilon") = py::none());
  cli_m.def("bounds", [](const std::filesystem::path& bundle, const std::string& mode) {
    return report(cli::cmd_bounds(bundle, mode, {}));
  });
}
