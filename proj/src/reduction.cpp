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

#include "mbqc_lab/reduction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>

#include "mbqc_lab/errors.hpp"

namespace mbqc {

void VerifierCircuit::validate() const {
  if (w < 1 || n < 0) throw InvariantError("verifier needs w >= 1 and n >= 0");
  if (circuit.num_qubits != w + n) {
    throw InvariantError("verifier circuit has " + std::to_string(circuit.num_qubits) +
                         " qubits, expected w + n = " + std::to_string(w + n));
  }
  circuit.validate();
}

VerifierCircuit equality_verifier(const BitString& s) {
  if (s.empty() || !is_bit_string(s)) throw ParseError("equality verifier needs a nonempty bit string");
  const int w = static_cast<int>(s.size());
  VerifierCircuit v{Circuit(w + 1), w, 1, "EQUALITY(" + s + ")"};
  Gate flag = Gate::x(w);
  for (int j = 0; j < w; ++j) {
    if (s[static_cast<std::size_t>(j)] == '0') v.circuit.add(Gate::x(j));
    flag.controls.push_back(j);
  }
  v.circuit.add(flag);
  for (int j = 0; j < w; ++j) {
    if (s[static_cast<std::size_t>(j)] == '0') v.circuit.add(Gate::x(j));
  }
  v.circuit.add(Gate::swap(0, w));
  return v;
}

VerifierCircuit all_reject_verifier(int w) {
  if (w < 1) throw InvariantError("verifier needs w >= 1");
  VerifierCircuit v{Circuit(w + 1), w, 1, "ALL-REJECT"};
  v.circuit.add(Gate::swap(0, w));
  return v;
}

VerifierCircuit rotation_verifier(int w, double theta) {
  if (w < 1) throw InvariantError("verifier needs w >= 1");
  VerifierCircuit v{Circuit(w + 1), w, 1, "ROTATION(" + std::to_string(theta) + ")"};
  v.circuit.add(Gate::ry(w, theta));
  v.circuit.add(Gate::swap(0, w));
  return v;
}

double acceptance_prob(const VerifierCircuit& v, const BitString& y) {
  if (static_cast<int>(y.size()) != v.w || !is_bit_string(y)) {
    throw InvariantError("witness length " + std::to_string(y.size()) + " does not match w = " +
                         std::to_string(v.w));
  }
  const Ket out = apply_circuit(Ket::from_bits(y + BitString(static_cast<std::size_t>(v.n), '0')),
                                v.circuit);
  const std::uint64_t bit = std::uint64_t{1} << (v.w + v.n - 1);
  double p = 0.0;
  for (std::uint64_t i = 0; i < out.dim(); ++i) {
    if (i & bit) p += std::norm(out[i]);
  }
  return std::clamp(p, 0.0, 1.0);
}

VerifierCircuit amplify_verifier(const VerifierCircuit& v, int k) {
  v.validate();
  if (k < 1 || k % 2 == 0) throw ParameterError("amplification needs an odd number of copies");
  // Block i occupies [i * (w + n), (i + 1) * (w + n)); block 0 reuses the
  // witness register. The vote lands on the last qubit before the final swap.
  const int block = v.w + v.n;
  const int vote = k * block;
  const int total = vote + 1;
  VerifierCircuit out{Circuit(total), v.w, total - v.w,
                      v.name + "^maj" + std::to_string(k)};
  for (int i = 1; i < k; ++i) {
    for (int j = 0; j < v.w; ++j) out.circuit.add(Gate::cnot(j, i * block + j));
  }
  for (int i = 0; i < k; ++i) out.circuit.append(v.circuit, i * block);

  // X on `vote` for every accept pattern with a strict majority of ones.
  for (std::uint32_t pattern = 0; pattern < (1U << k); ++pattern) {
    if (2 * std::popcount(pattern) <= k) continue;
    Gate flip = Gate::x(vote);
    std::vector<int> zeros;
    for (int i = 0; i < k; ++i) {
      flip.controls.push_back(i * block);
      if (!((pattern >> i) & 1U)) zeros.push_back(i * block);
    }
    for (int q : zeros) out.circuit.add(Gate::x(q));
    out.circuit.add(flip);
    for (int q : zeros) out.circuit.add(Gate::x(q));
  }
  out.circuit.add(Gate::swap(0, vote));
  return out;
}

ReductionParams ReductionParams::make(int n, int w, int r, int t) {
  if (n < 0 || w < 1) throw ParameterError("verifier register sizes must satisfy n >= 0, w >= 1");
  if (r < 1 || t < 1) throw ParameterError("r and t must be positive integers");
  if (r < 2 * t + 1) {
    throw ParameterError("r = " + std::to_string(r) + " violates r >= 2t + 1 = " +
                         std::to_string(2 * t + 1));
  }
  return {n, w, r, t};
}

Circuit me_prep_circuit(int r, std::optional<int> controlled_by, int offset,
                        std::optional<int> num_qubits) {
  if (r < 1) throw ParameterError("ME preparation needs r >= 1");
  int total = offset + 2 * r;
  if (controlled_by) total = std::max(total, *controlled_by + 1);
  if (num_qubits) {
    if (*num_qubits < total) throw InvariantError("ME preparation does not fit the register");
    total = *num_qubits;
  }
  Circuit c(total);
  auto add = [&](Gate g) {
    if (controlled_by) g = g.with_control(*controlled_by);
    c.add(std::move(g));
  };
  for (int i = 0; i < r; ++i) add(Gate::h(offset + i));
  for (int i = 0; i < r; ++i) add(Gate::cnot(offset + i, offset + r + i));
  c.validate();
  return c;
}

Circuit build_U(const VerifierCircuit& v, const ReductionParams& params) {
  v.validate();
  if (v.w != params.w || v.n != params.n) {
    throw ParameterError("reduction parameters do not match the verifier (w, n)");
  }
  const int main = v.w + v.n;
  const int flag = main;
  Circuit u(params.unitary_qubits());
  u.append(v.circuit);
  u.add(Gate::cnot(0, flag));
  u.append(me_prep_circuit(params.r, 0, flag + 1, params.unitary_qubits()));
  u.append(v.circuit.adjoint());
  u.validate();
  return u;
}

UnitaryFamily build_family(const Circuit& U, int w) {
  if (w < 0 || w > U.num_qubits) throw InvariantError("witness register larger than U");
  auto shared = std::make_shared<const Circuit>(U);
  return {w, U.num_qubits, [shared, w](const BitString& y) {
            if (static_cast<int>(y.size()) != w) throw InvariantError("witness length mismatch");
            Circuit c(shared->num_qubits);
            for (int j = 0; j < w; ++j) {
              if (y[static_cast<std::size_t>(j)] == '1') c.add(Gate::x(j));
            }
            c.append(*shared);
            return c;
          }};
}

ResourceState build_resource(const ReductionParams& params) {
  return {Ket(params.resource_qubits()), params.unitary_qubits()};
}

StrategyTable no_case_strategy(const ReductionParams& params) {
  StrategyTable t;
  t.w = params.w;
  t.num_measured = 1;
  t.num_output = params.unitary_qubits();
  for (const BitString& y : all_bit_strings(params.w)) {
    t.bases.emplace(StrategyTable::basis_key(1, y, ""), Unitary2::identity());
    // Output position j is resource qubit j + 1, i.e. U's qubit j.
    std::vector<Unitary2> vs(static_cast<std::size_t>(t.num_output));
    for (int j = 0; j < params.w; ++j) {
      if (y[static_cast<std::size_t>(j)] == '1') vs[static_cast<std::size_t>(j)] = Unitary2::pauli_x();
    }
    t.corrections.emplace(StrategyTable::correction_key(y, "0"), vs);
    t.corrections.emplace(StrategyTable::correction_key(y, "1"), vs);
  }
  return t;
}

BoundValues bound_values(double p, int r, int t, bool check_parameters) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("acceptance probability must lie in [0, 1]");
  if (r < 1 || t < 1) throw ParameterError("r and t must be positive integers");
  BoundValues b;
  b.yes_branch_bound = 1.0 - p + p * std::ldexp(1.0, -r);
  b.yes_fidelity_bound = std::pow(2.0, (-r + 1) / 2.0);
  b.yes_distance_floor = 1.0 - b.yes_fidelity_bound;
  b.no_fidelity_sq_floor = (1.0 - p) * (1.0 - p);
  b.no_distance_ceiling = b.yes_fidelity_bound;
  b.epsilon = std::ldexp(1.0, -t);
  if (check_parameters) {
    if (r < 2 * t + 1) {
      throw ParameterError("r = " + std::to_string(r) + " violates r >= 2t + 1");
    }
    constexpr double slack = 1e-12;
    if (p >= 1.0 - std::ldexp(1.0, -r) && b.yes_distance_floor < 1.0 - b.epsilon - slack) {
      throw BoundViolation("YES distance floor fell below 1 - 2^-t");
    }
    if (b.no_distance_ceiling > b.epsilon + slack) {
      throw BoundViolation("NO distance ceiling exceeds 2^-t");
    }
  }
  return b;
}

ReductionBundle build_reduction(const VerifierCircuit& v, int r, int t) {
  v.validate();
  const ReductionParams params = ReductionParams::make(v.n, v.w, r, t);
  return {params, v, build_U(v, params), build_resource(params), no_case_strategy(params)};
}

}  // namespace mbqc
