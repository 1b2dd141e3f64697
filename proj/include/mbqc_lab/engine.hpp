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

// Adaptive single-qubit measurement protocol on a resource state.
//
// The first N - n qubits of the resource are measured in index order; step j
// (1-based) asks the strategy for a basis given (j, y, m_1..m_{j-1}). After the
// last measurement the strategy supplies one correction per output qubit.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mbqc_lab/quantum_core.hpp"

namespace mbqc {

struct ResourceState {
  Ket state;
  int num_output = 0;

  ResourceState() = default;
  ResourceState(Ket s, int n);

  int num_qubits() const { return state.num_qubits(); }
  int num_measured() const { return state.num_qubits() - num_output; }
};

/// Host-code form of a measurement strategy. Both callbacks must be
/// deterministic and side-effect free.
struct Strategy {
  std::function<Unitary2(int step, const BitString& y, const BitString& prefix)> next_basis;
  std::function<std::vector<Unitary2>(const BitString& y, const BitString& m)> corrections;
};

/// Serializable lookup-table strategy.
///
/// Basis keys are "j|y|prefix" (e.g. "2|01|1"), correction keys are "y|m".
/// A missing basis falls back to `default_basis` (error when unset); a missing
/// correction list means the identity on every output qubit.
struct StrategyTable {
  int w = 0;
  int num_measured = 0;
  int num_output = 0;
  std::map<std::string, Unitary2> bases;
  std::map<std::string, std::vector<Unitary2>> corrections;
  std::optional<Unitary2> default_basis;

  static std::string basis_key(int step, const BitString& y, const BitString& prefix);
  static std::string correction_key(const BitString& y, const BitString& m);

  Strategy to_strategy() const;
};

struct Branch {
  BitString m;
  double probability = 0.0;
  Ket post_state;  // on the n output qubits, corrections applied
};

struct OutputMixture {
  int num_output = 0;
  std::vector<Branch> branches;
  /// Upper bound on the probability mass discarded with pruned branches.
  double pruned_mass_bound = 0.0;

  std::vector<double> weights() const;
  std::vector<Ket> kets() const;
  double total_probability() const;
  /// sum_m p_m |psi_m><psi_m|.
  DensityOp density() const;
};

struct EngineOptions {
  std::size_t max_branches = std::size_t{1} << 20;
};

/// Depth-first enumeration of every outcome string with nonzero probability.
OutputMixture run_all_branches(const ResourceState& res, const Strategy& strat, const BitString& y,
                               const EngineOptions& opts = {});

/// One outcome path sampled with the exact conditional probabilities.
Branch sample_run(const ResourceState& res, const Strategy& strat, const BitString& y,
                  std::uint64_t seed);

/// prod_edges CZ applied to |+>^{num_vertices}.
Ket build_graph_state(int num_vertices, const std::vector<std::pair<int, int>>& edges);

// ------------------------------------------------------ one-way cluster fixture

using EulerAngles = std::array<double, 3>;

inline constexpr int kClusterLength = 5;

/// Path graph 0-1-2-3-4 with qubit 4 as the single output.
ResourceState cluster_resource();

/// Four distinct angle triples (w = 2) used by the shipped fixtures.
std::vector<EulerAngles> default_cluster_angles();

/// Target realized by the cluster strategy for angles (a, b, c):
/// RZ(c) RX(b) RZ(a) H applied to |0>.
Circuit euler_target_circuit(const EulerAngles& angles);

/// Standard one-way strategy on the 5-qubit path: qubits 0..3 are measured at
/// angles (a, b, c, 0) with signs adapted to the running Pauli frame, and the
/// output receives the frame correction Z^z X^x. angles_per_y[i] is used for
/// the witness whose numeric value is i; the witness length is log2 of the
/// list size.
Strategy cluster_strategy(const std::vector<EulerAngles>& angles_per_y);
/// As above, and rejects resources that are not the 5-qubit path state.
Strategy cluster_strategy(const ResourceState& res, const std::vector<EulerAngles>& angles_per_y);

/// Tabulated form of cluster_strategy (15 basis entries and 16 corrections
/// per witness).
StrategyTable cluster_strategy_table(const std::vector<EulerAngles>& angles_per_y);

}  // namespace mbqc
