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

#include "mbqc_lab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "mbqc_lab/errors.hpp"

namespace mbqc {

ResourceState::ResourceState(Ket s, int n) : state(std::move(s)), num_output(n) {
  if (n < 0 || n > state.num_qubits()) {
    throw InvariantError("resource: num_output must lie in [0, num_qubits]");
  }
}

// ------------------------------------------------------------- StrategyTable

std::string StrategyTable::basis_key(int step, const BitString& y, const BitString& prefix) {
  return std::to_string(step) + "|" + y + "|" + prefix;
}

std::string StrategyTable::correction_key(const BitString& y, const BitString& m) {
  return y + "|" + m;
}

Strategy StrategyTable::to_strategy() const {
  auto table = std::make_shared<const StrategyTable>(*this);
  Strategy s;
  s.next_basis = [table](int step, const BitString& y, const BitString& prefix) {
    auto it = table->bases.find(basis_key(step, y, prefix));
    if (it != table->bases.end()) return it->second;
    if (table->default_basis) return *table->default_basis;
    throw InvariantError("strategy table has no basis for '" + basis_key(step, y, prefix) + "'");
  };
  s.corrections = [table](const BitString& y, const BitString& m) {
    auto it = table->corrections.find(correction_key(y, m));
    if (it != table->corrections.end()) return it->second;
    return std::vector<Unitary2>(static_cast<std::size_t>(table->num_output));
  };
  return s;
}

// ------------------------------------------------------------- OutputMixture

std::vector<double> OutputMixture::weights() const {
  std::vector<double> w;
  w.reserve(branches.size());
  for (const Branch& b : branches) w.push_back(b.probability);
  return w;
}

std::vector<Ket> OutputMixture::kets() const {
  std::vector<Ket> k;
  k.reserve(branches.size());
  for (const Branch& b : branches) k.push_back(b.post_state);
  return k;
}

double OutputMixture::total_probability() const {
  double s = 0.0;
  for (const Branch& b : branches) s += b.probability;
  return s;
}

DensityOp OutputMixture::density() const {
  const Eigen::Index d = Eigen::Index{1} << num_output;
  Matrix m = Matrix::Zero(d, d);
  for (const Branch& b : branches) {
    m.noalias() += b.probability * (b.post_state.amplitudes() * b.post_state.amplitudes().adjoint());
  }
  return DensityOp::from_matrix_unchecked(std::move(m));
}

// -------------------------------------------------------------------- engine

namespace {

void check_y(const BitString& y) {
  if (!is_bit_string(y)) throw ParseError("witness is not a bit string: '" + y + "'");
}

Ket corrected(const Ket& state, const Strategy& strat, const BitString& y, const BitString& m) {
  const std::vector<Unitary2> vs = strat.corrections(y, m);
  if (static_cast<int>(vs.size()) != state.num_qubits()) {
    throw InvariantError("strategy returned " + std::to_string(vs.size()) +
                         " corrections for " + std::to_string(state.num_qubits()) +
                         " output qubits");
  }
  return apply_local(state, vs);
}

struct Enumerator {
  const Strategy& strat;
  const BitString& y;
  int num_measured;
  const EngineOptions& opts;
  OutputMixture& out;

  void descend(const Ket& state, BitString& prefix, double prob) {
    const int step = static_cast<int>(prefix.size()) + 1;
    if (step > num_measured) {
      if (out.branches.size() >= opts.max_branches) {
        throw CapExceeded("branch count exceeds the configured cap of " +
                          std::to_string(opts.max_branches));
      }
      out.branches.push_back({prefix, prob, corrected(state, strat, y, prefix)});
      return;
    }
    const Unitary2 u = strat.next_basis(step, y, prefix);
    auto split = measure_in_basis(state, 0, u);
    for (auto& br : split) {
      const double p = prob * br.probability;
      if (br.zero) {
        // Every descendant of a pruned node is also pruned.
        out.pruned_mass_bound += prob * tol::kPrune;
        continue;
      }
      prefix.push_back(static_cast<char>('0' + br.outcome));
      descend(*br.post_state, prefix, p);
      prefix.pop_back();
    }
  }
};

}  // namespace

OutputMixture run_all_branches(const ResourceState& res, const Strategy& strat, const BitString& y,
                               const EngineOptions& opts) {
  check_y(y);
  const int k = res.num_measured();
  if (k > 20) throw CapExceeded("more than 20 measured qubits");
  if (std::abs(res.state.norm() - 1.0) > tol::kUnitary) {
    throw InvariantError("resource state is not normalized");
  }
  OutputMixture out;
  out.num_output = res.num_output;
  BitString prefix;
  Enumerator e{strat, y, k, opts, out};
  e.descend(res.state, prefix, 1.0);

  const double total = out.total_probability();
  if (total > 1.0 + tol::kCompare || total < 1.0 - tol::kCompare - out.pruned_mass_bound) {
    throw InvariantError("branch probabilities sum to " + std::to_string(total));
  }
  return out;
}

Branch sample_run(const ResourceState& res, const Strategy& strat, const BitString& y,
                  std::uint64_t seed) {
  check_y(y);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Ket state = res.state;
  BitString prefix;
  double prob = 1.0;
  for (int step = 1; step <= res.num_measured(); ++step) {
    auto split = measure_in_basis(state, 0, strat.next_basis(step, y, prefix));
    const double r = uniform(rng);
    const int pick = (split[1].zero || (!split[0].zero && r < split[0].probability)) ? 0 : 1;
    prob *= split[static_cast<std::size_t>(pick)].probability;
    state = *split[static_cast<std::size_t>(pick)].post_state;
    prefix.push_back(static_cast<char>('0' + pick));
  }
  return {prefix, prob, corrected(state, strat, y, prefix)};
}

Ket build_graph_state(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  if (num_vertices < 0) throw InvariantError("graph: negative vertex count");
  std::set<std::pair<int, int>> seen;
  Circuit c(num_vertices);
  for (int q = 0; q < num_vertices; ++q) c.add(Gate::h(q));
  for (auto [a, b] : edges) {
    if (a == b) throw InvariantError("graph: self-loop on vertex " + std::to_string(a));
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices) {
      throw InvariantError("graph: edge endpoint out of range");
    }
    if (!seen.insert(std::minmax(a, b)).second) {
      throw InvariantError("graph: duplicate edge (" + std::to_string(a) + "," +
                           std::to_string(b) + ")");
    }
    c.add(Gate::cz(a, b));
  }
  return apply_circuit(Ket(num_vertices), c);
}

// ------------------------------------------------------------ cluster fixture

ResourceState cluster_resource() {
  std::vector<std::pair<int, int>> path;
  for (int i = 0; i + 1 < kClusterLength; ++i) path.emplace_back(i, i + 1);
  return {build_graph_state(kClusterLength, path), 1};
}

std::vector<EulerAngles> default_cluster_angles() {
  return {{0.3, 1.1, -0.7}, {0.785, 1.571, 0.393}, {1.9, 0.4, 2.5}, {-1.2, 2.8, 0.6}};
}

Circuit euler_target_circuit(const EulerAngles& angles) {
  Circuit c(1);
  c.add(Gate::h(0));
  c.add(Gate::rz(0, angles[0]));
  c.add(Gate::single(GateKind::RX, 0, {angles[1]}));
  c.add(Gate::rz(0, angles[2]));
  return c;
}

namespace {

// Pauli frame (x, z) before measuring step `prefix.size() + 1`: the live state
// on the next qubit is X^x Z^z applied to the ideal state.
std::pair<int, int> cluster_frame(const BitString& prefix) {
  int x = 0, z = 0;
  for (char c : prefix) {
    const int s = c - '0';
    const int nx = s ^ z;
    z = x;
    x = nx;
  }
  return {x, z};
}

int witness_count_log2(std::size_t count) {
  int w = 0;
  while ((std::size_t{1} << w) < count) ++w;
  if ((std::size_t{1} << w) != count || count == 0) {
    throw InvariantError("cluster strategy needs 2^w angle triples");
  }
  return w;
}

}  // namespace

Strategy cluster_strategy(const std::vector<EulerAngles>& angles_per_y) {
  const int w = witness_count_log2(angles_per_y.size());
  auto angles = std::make_shared<const std::vector<EulerAngles>>(angles_per_y);
  Strategy s;
  s.next_basis = [angles, w](int step, const BitString& y, const BitString& prefix) {
    if (step < 1 || step > kClusterLength - 1 || static_cast<int>(y.size()) != w) {
      throw InvariantError("cluster strategy: wrong resource shape");
    }
    const EulerAngles& a = (*angles)[from_bits(y)];
    const double theta = step <= 3 ? a[static_cast<std::size_t>(step - 1)] : 0.0;
    const int x = cluster_frame(prefix).first;
    return Unitary2::equatorial(x ? theta : -theta);
  };
  s.corrections = [](const BitString&, const BitString& m) {
    const auto [x, z] = cluster_frame(m);
    Unitary2 v;
    if (x) v = Unitary2::pauli_x() * v;
    if (z) v = Unitary2::pauli_z() * v;
    return std::vector<Unitary2>{v};
  };
  return s;
}

Strategy cluster_strategy(const ResourceState& res, const std::vector<EulerAngles>& angles_per_y) {
  if (res.num_qubits() != kClusterLength || res.num_output != 1) {
    throw InvariantError("cluster strategy: wrong resource shape (need a 5-qubit path, 1 output)");
  }
  const Ket ref = cluster_resource().state;
  if (std::abs(std::abs(inner(ref, res.state)) - 1.0) > tol::kCompare) {
    throw InvariantError("cluster strategy: resource is not the 5-qubit path graph state");
  }
  return cluster_strategy(angles_per_y);
}

StrategyTable cluster_strategy_table(const std::vector<EulerAngles>& angles_per_y) {
  const Strategy s = cluster_strategy(angles_per_y);
  StrategyTable t;
  t.w = witness_count_log2(angles_per_y.size());
  t.num_measured = kClusterLength - 1;
  t.num_output = 1;
  for (const BitString& y : all_bit_strings(t.w)) {
    for (int step = 1; step <= t.num_measured; ++step) {
      for (const BitString& prefix : all_bit_strings(step - 1)) {
        t.bases.emplace(StrategyTable::basis_key(step, y, prefix), s.next_basis(step, y, prefix));
      }
    }
    for (const BitString& m : all_bit_strings(t.num_measured)) {
      t.corrections.emplace(StrategyTable::correction_key(y, m), s.corrections(y, m));
    }
  }
  return t;
}

}  // namespace mbqc
