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

// JSON file formats. Complex numbers are [re, im]; 2x2 matrices are four
// complex entries in row-major order.
//
//   gate      {"kind": "CNOT", "targets": [0, 1], "controls": [], "params": []}
//   circuit   {"num_qubits": N, "gates": [gate...]}
//   verifier  {"w": w, "n": n, "name": "...", "gates": [gate...]}
//   resource  {"num_qubits": N, "num_output": n} plus exactly one of
//             "amplitudes": [[re, im]...], "graph": {"edges": [[a, b]...]},
//             "zero": true
//   strategy  {"w", "num_measured", "num_output",
//              "bases": {"j|y|prefix": matrix}, "corrections": {"y|m": [matrix...]},
//              "default_basis": matrix (optional)}
//   family    {"w": w, "n": n, "members": [circuit...]}  (member i <-> y = i)
//   bundle    {"format": "mbqc-lab/reduction-bundle", "params": {n, w, r, t},
//              "verifier": verifier, "U": circuit, "family": "U∘X^y",
//              "resource": {"num_qubits", "num_output", "zero": true},
//              "honest_strategy": strategy}
//
// Readers throw ParseError on malformed input and InvariantError when a
// well-formed document violates a domain invariant.

#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "mbqc_lab/engine.hpp"
#include "mbqc_lab/quantum_core.hpp"
#include "mbqc_lab/reduction.hpp"
#include "mbqc_lab/universality.hpp"

namespace mbqc::io {

using json = nlohmann::json;

inline constexpr const char* kBundleFormat = "mbqc-lab/reduction-bundle";
inline constexpr const char* kFamilyTag = "U∘X^y";

json to_json(Complex c);
Complex complex_from_json(const json& j);
json to_json(const Unitary2& u);
Unitary2 unitary2_from_json(const json& j);
json to_json(const Gate& g);
Gate gate_from_json(const json& j);
json to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);
json to_json(const VerifierCircuit& v);
VerifierCircuit verifier_from_json(const json& j);
json to_json(const ResourceState& r);
ResourceState resource_from_json(const json& j);
json to_json(const StrategyTable& t);
StrategyTable strategy_from_json(const json& j);
/// Dense family document (evaluates every member circuit).
json family_to_json(const UnitaryFamily& f);
UnitaryFamily family_from_json(const json& j);
json to_json(const ReductionBundle& b);
ReductionBundle bundle_from_json(const json& j);

/// Reads and parses a JSON document; ParseError on I/O or syntax failure.
json read_json_file(const std::filesystem::path& path);
/// Sorted keys, 2-space indent, trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);
std::string dump_report(const json& j);

/// Amplitude fingerprint: FNV-1a over amplitudes rounded to 1e-9 after fixing
/// the global phase by the largest-magnitude entry.
std::string fingerprint(const Ket& k);

}  // namespace mbqc::io
