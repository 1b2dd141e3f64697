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

#include "mbqc_lab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mbqc_lab/errors.hpp"

namespace mbqc::io {

namespace {

// Field access that reports ParseError instead of nlohmann exceptions.
const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<int> int_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<int> out;
  for (const json& e : v) {
    if (!e.is_number_integer()) throw ParseError(std::string("field '") + key + "' holds a non-integer");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const Unitary2& u) {
  json out = json::array();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.push_back(to_json(u.matrix()(r, c)));
  return out;
}

Unitary2 unitary2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw ParseError("2x2 matrices are four [re, im] entries");
  Matrix2 m;
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = complex_from_json(j[static_cast<std::size_t>(i)]);
  return Unitary2(m);
}

json to_json(const Gate& g) {
  return {{"kind", to_string(g.kind)},
          {"targets", g.targets},
          {"controls", g.controls},
          {"params", g.params}};
}

Gate gate_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) throw ParseError("gate kind must be a string");
  Gate g;
  g.kind = gate_kind_from_string(kind.get<std::string>());
  g.targets = int_list(j, "targets");
  g.controls = int_list(j, "controls");
  if (j.contains("params")) {
    if (!j.at("params").is_array()) throw ParseError("gate params must be an array");
    for (const json& p : j.at("params")) {
      if (!p.is_number()) throw ParseError("gate params must be numbers");
      g.params.push_back(p.get<double>());
    }
  }
  return g;
}

json to_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates) gates.push_back(to_json(g));
  return {{"num_qubits", c.num_qubits}, {"gates", gates}};
}

Circuit circuit_from_json(const json& j) {
  Circuit c(int_field(j, "num_qubits"));
  const json& gates = field(j, "gates");
  if (!gates.is_array()) throw ParseError("'gates' must be an array");
  for (const json& g : gates) c.add(gate_from_json(g));
  c.validate();
  return c;
}

json to_json(const VerifierCircuit& v) {
  json j = to_json(v.circuit);
  j.erase("num_qubits");
  j["w"] = v.w;
  j["n"] = v.n;
  j["name"] = v.name;
  return j;
}

VerifierCircuit verifier_from_json(const json& j) {
  VerifierCircuit v;
  v.w = int_field(j, "w");
  v.n = int_field(j, "n");
  v.name = j.value("name", std::string("verifier"));
  json cj = {{"num_qubits", v.w + v.n}, {"gates", field(j, "gates")}};
  v.circuit = circuit_from_json(cj);
  v.validate();
  return v;
}

json to_json(const ResourceState& r) {
  json amps = json::array();
  for (std::size_t i = 0; i < r.state.dim(); ++i) amps.push_back(to_json(r.state[i]));
  return {{"num_qubits", r.num_qubits()}, {"num_output", r.num_output}, {"amplitudes", amps}};
}

ResourceState resource_from_json(const json& j) {
  const int n = int_field(j, "num_qubits");
  const int out = int_field(j, "num_output");
  if (n < 0 || n > 24) throw ParseError("resource num_qubits out of range");
  const int forms = static_cast<int>(j.contains("amplitudes")) + static_cast<int>(j.contains("graph")) +
                    static_cast<int>(j.contains("zero"));
  if (forms != 1) throw ParseError("resource needs exactly one of 'amplitudes', 'graph', 'zero'");
  if (j.contains("zero")) return {Ket(n), out};
  if (j.contains("graph")) {
    std::vector<std::pair<int, int>> edges;
    for (const json& e : field(field(j, "graph"), "edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw ParseError("graph edges are [a, b] integer pairs");
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return {build_graph_state(n, edges), out};
  }
  const json& amps = j.at("amplitudes");
  if (!amps.is_array() || amps.size() != (std::size_t{1} << n)) {
    throw ParseError("resource needs 2^num_qubits amplitudes");
  }
  Vector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(amps[i]);
  return {Ket::from_amplitudes(std::move(v)), out};
}

json to_json(const StrategyTable& t) {
  json bases = json::object();
  for (const auto& [k, u] : t.bases) bases[k] = to_json(u);
  json corr = json::object();
  for (const auto& [k, vs] : t.corrections) {
    json list = json::array();
    for (const Unitary2& u : vs) list.push_back(to_json(u));
    corr[k] = list;
  }
  json j = {{"w", t.w},
            {"num_measured", t.num_measured},
            {"num_output", t.num_output},
            {"bases", bases},
            {"corrections", corr}};
  if (t.default_basis) j["default_basis"] = to_json(*t.default_basis);
  return j;
}

StrategyTable strategy_from_json(const json& j) {
  StrategyTable t;
  t.w = int_field(j, "w");
  t.num_measured = int_field(j, "num_measured");
  t.num_output = int_field(j, "num_output");
  const json& bases = field(j, "bases");
  if (!bases.is_object()) throw ParseError("'bases' must be an object");
  for (const auto& [k, v] : bases.items()) {
    const auto bar1 = k.find('|');
    const auto bar2 = k.find('|', bar1 == std::string::npos ? bar1 : bar1 + 1);
    if (bar1 == std::string::npos || bar2 == std::string::npos) {
      throw ParseError("basis key '" + k + "' is not of the form j|y|prefix");
    }
    t.bases.emplace(k, unitary2_from_json(v));
  }
  if (j.contains("corrections")) {
    const json& corr = j.at("corrections");
    if (!corr.is_object()) throw ParseError("'corrections' must be an object");
    for (const auto& [k, v] : corr.items()) {
      if (!v.is_array() || static_cast<int>(v.size()) != t.num_output) {
        throw ParseError("correction '" + k + "' must list num_output matrices");
      }
      std::vector<Unitary2> vs;
      for (const json& m : v) vs.push_back(unitary2_from_json(m));
      t.corrections.emplace(k, std::move(vs));
    }
  }
  if (j.contains("default_basis")) t.default_basis = unitary2_from_json(j.at("default_basis"));
  return t;
}

json family_to_json(const UnitaryFamily& f) {
  json members = json::array();
  for (const BitString& y : all_bit_strings(f.w)) members.push_back(to_json(f.member(y)));
  return {{"w", f.w}, {"n", f.n}, {"members", members}};
}

UnitaryFamily family_from_json(const json& j) {
  const int w = int_field(j, "w");
  const int n = int_field(j, "n");
  if (w < 0 || w > 12) throw ParseError("family w out of range");
  std::vector<Circuit> members;
  for (const json& c : field(j, "members")) members.push_back(circuit_from_json(c));
  if (members.size() != (std::size_t{1} << w)) throw ParseError("family needs 2^w members");
  for (const Circuit& c : members) {
    if (c.num_qubits != n) throw ParseError("family member qubit count differs from n");
  }
  return family_from_circuits(w, std::move(members));
}

json to_json(const ReductionBundle& b) {
  return {{"format", kBundleFormat},
          {"params", {{"n", b.params.n}, {"w", b.params.w}, {"r", b.params.r}, {"t", b.params.t}}},
          {"verifier", to_json(b.verifier)},
          {"U", to_json(b.U)},
          {"family", kFamilyTag},
          {"resource",
           {{"num_qubits", b.resource.num_qubits()}, {"num_output", b.resource.num_output}, {"zero", true}}},
          {"honest_strategy", to_json(b.honest_strategy)}};
}

ReductionBundle bundle_from_json(const json& j) {
  if (j.value("format", std::string()) != kBundleFormat) throw ParseError("not a reduction bundle");
  if (j.value("family", std::string()) != kFamilyTag) throw ParseError("unsupported family tag");
  const json& p = field(j, "params");
  ReductionBundle b;
  try {
    b.params = ReductionParams::make(int_field(p, "n"), int_field(p, "w"), int_field(p, "r"),
                                     int_field(p, "t"));
  } catch (const ParameterError& e) {
    throw ParseError(std::string("bundle parameters: ") + e.what());
  }
  b.verifier = verifier_from_json(field(j, "verifier"));
  b.U = circuit_from_json(field(j, "U"));
  b.resource = resource_from_json(field(j, "resource"));
  b.honest_strategy = strategy_from_json(field(j, "honest_strategy"));
  if (b.verifier.w != b.params.w || b.verifier.n != b.params.n) {
    throw InvariantError("bundle verifier does not match params");
  }
  if (b.U.num_qubits != b.params.unitary_qubits() ||
      b.resource.num_qubits() != b.params.resource_qubits() ||
      b.resource.num_output != b.params.unitary_qubits()) {
    throw InvariantError("bundle register sizes are inconsistent with params");
  }
  return b;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << dump_report(j);
}

std::string fingerprint(const Ket& k) {
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < k.dim(); ++i) {
    if (std::abs(k[i]) > std::abs(k[pivot]) + 1e-12) pivot = i;
  }
  const Complex phase = std::abs(k[pivot]) > 0 ? std::conj(k[pivot]) / std::abs(k[pivot]) : 1.0;
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](long long v) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<std::uint64_t>((v >> (8 * b)) & 0xff);
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t i = 0; i < k.dim(); ++i) {
    const Complex a = k[i] * phase;
    // +0.0 keeps -0 and 0 in the same bucket.
    mix(std::llround(a.real() * 1e9 + 0.0));
    mix(std::llround(a.imag() * 1e9 + 0.0));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mbqc::io
