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

// Verifier-to-resource reduction.
//
// Register layout of the constructed unitary U (n + w + 2r + 1 qubits):
//   [0, w)            witness register
//   [w, w + n)        verifier work register
//   w + n             flag qubit, set iff the verifier accepts
//   [w + n + 1, ...)  2r ancillas, first half then second half of |ME>
// The resource is |0^{n+w+2r+2}>; its qubit 0 is the single measured qubit and
// output qubit k corresponds to qubit k of U.

#pragma once

#include <optional>
#include <string>

#include "mbqc_lab/engine.hpp"
#include "mbqc_lab/quantum_core.hpp"
#include "mbqc_lab/universality.hpp"

namespace mbqc {

/// Verifier circuit on w witness qubits followed by n work qubits (initially
/// |0^n>). Qubit 0 holds the accept bit after the circuit runs.
struct VerifierCircuit {
  Circuit circuit;
  int w = 0;
  int n = 0;
  std::string name;

  void validate() const;
};

/// Accepts exactly y == s: the AND of the matched witness bits is computed into
/// the work qubit, which is then swapped to qubit 0. n = 1.
VerifierCircuit equality_verifier(const BitString& s);
/// Never accepts (empty circuit). n = 1.
VerifierCircuit all_reject_verifier(int w);
/// Ignores the witness; accepts with probability sin^2(theta / 2). n = 1.
VerifierCircuit rotation_verifier(int w, double theta);

/// Probability that qubit 0 of V(|y>|0^n>) reads 1.
double acceptance_prob(const VerifierCircuit& v, const BitString& y);

/// k independent copies (shared witness, fresh work registers) followed by a
/// reversible majority vote swapped to qubit 0. k must be odd.
VerifierCircuit amplify_verifier(const VerifierCircuit& v, int k);

struct ReductionParams {
  int n = 0;
  int w = 0;
  int r = 1;
  int t = 1;

  /// Throws ParameterError unless r >= 2t + 1 (and r, t >= 1).
  static ReductionParams make(int n, int w, int r, int t);

  int unitary_qubits() const { return n + w + 2 * r + 1; }
  int resource_qubits() const { return n + w + 2 * r + 2; }
};

/// H on the first r ancillas then CNOT fan-out to the second r, producing
/// 2^{-r/2} sum_j |j>|j>. Ancillas start at `offset`; with `controlled_by`,
/// every gate gains that control. The circuit has max(offset + 2r, control + 1)
/// qubits unless num_qubits is given.
Circuit me_prep_circuit(int r, std::optional<int> controlled_by = std::nullopt, int offset = 0,
                        std::optional<int> num_qubits = std::nullopt);

/// V on the main register, flag <- accept bit, ME on the ancillas controlled
/// by the accept bit, then V^dagger on the main register.
Circuit build_U(const VerifierCircuit& v, const ReductionParams& params);

/// member(y) = U after X on every witness qubit j with y_j = 1.
UnitaryFamily build_family(const Circuit& U, int w);

ResourceState build_resource(const ReductionParams& params);

/// Computational-basis measurement of the single measured qubit, then X on
/// output positions j < w where y_j = 1. Produces |y 0^{n+2r+1}> for every y.
StrategyTable no_case_strategy(const ReductionParams& params);

struct BoundValues {
  double yes_branch_bound = 0.0;     // 1 - p + p / 2^r
  double yes_fidelity_bound = 0.0;   // 2^{(-r+1)/2}
  double yes_distance_floor = 0.0;   // 1 - 2^{(-r+1)/2}
  double no_fidelity_sq_floor = 0.0; // (1 - p)^2
  double no_distance_ceiling = 0.0;  // 2^{(-r+1)/2}
  double epsilon = 0.0;              // 2^{-t}
};

/// Pure arithmetic. With check_parameters, enforces r >= 2t + 1 and asserts
/// the two chain endpoints against 2^{-t} (BoundViolation on failure).
BoundValues bound_values(double p, int r, int t, bool check_parameters = false);

struct ReductionBundle {
  ReductionParams params;
  VerifierCircuit verifier;
  Circuit U;
  ResourceState resource;
  StrategyTable honest_strategy;

  UnitaryFamily family() const { return build_family(U, params.w); }
};

ReductionBundle build_reduction(const VerifierCircuit& v, int r, int t);

}  // namespace mbqc
