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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbqc_lab/engine.hpp"
#include "mbqc_lab/quantum_core.hpp"

namespace mbqc {

/// Indexed target set {U_y : y in {0,1}^w}, each acting on n qubits.
struct UnitaryFamily {
  int w = 0;
  int n = 0;
  std::function<Circuit(const BitString& y)> member;

  /// U_y |0^n>.
  Ket target(const BitString& y) const;
};

UnitaryFamily family_from_circuits(int w, std::vector<Circuit> members);
/// Cluster-fixture targets: member y is euler_target_circuit(angles_per_y[y]).
UnitaryFamily cluster_family(const std::vector<EulerAngles>& angles_per_y);

struct PrecisionParams {
  double epsilon = 0.5;
  std::optional<int> t;  // set when epsilon = 2^-t

  static PrecisionParams from_t(int t);
  static PrecisionParams from_epsilon(double epsilon);
};

struct YEvaluation {
  BitString y;
  double distance = 0.0;
  double fidelity = 0.0;
};

struct Verdict {
  enum class Kind { Universal, NonUniversal, OutsidePromise };

  Kind kind = Kind::OutsidePromise;
  /// Witness for NonUniversal; argmax y for OutsidePromise; argmax y for
  /// Universal as well (the tightest instance).
  BitString y;
  double distance = 0.0;
  double epsilon = 0.0;
  std::vector<YEvaluation> per_y;
};

std::string to_string(Verdict::Kind k);

struct EvalOptions {
  EngineOptions engine;
  int threads = 1;
  std::uint64_t seed = 0;
};

/// 1/2 || sum_m p_m |psi_m><psi_m| - U_y|0><0|U_y^dagger ||_1.
double distance_for_y(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                      const BitString& y, const EvalOptions& opts = {});
/// sqrt(sum_m p_m |<psi_m|U_y|0^n>|^2).
double fidelity_for_y(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                      const BitString& y, const EvalOptions& opts = {});
/// Both quantities from a single engine run.
YEvaluation evaluate_y(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                       const BitString& y, const EvalOptions& opts = {});

/// Universal if every d_y <= eps, NonUniversal if some d_y >= 1 - eps,
/// otherwise OutsidePromise. Ties pick the lexicographically smallest y.
Verdict check_universality(const ResourceState& res, const Strategy& strat,
                           const UnitaryFamily& fam, const PrecisionParams& prec,
                           const EvalOptions& opts = {});

// ------------------------------------------------------- continuous optimizers

struct OptimizerOptions {
  int restarts = 8;  // random restarts in addition to the identity start
  int max_sweeps = 100;
  double min_gain = 1e-10;
  std::uint64_t seed = 0;
  bool record_history = false;
};

struct CorrectionResult {
  std::vector<Unitary2> corrections;
  double overlap = 0.0;  // |<target| (x) v_j |branch>|
  /// Overlap after every single-qubit update of the winning start (when
  /// record_history is set).
  std::vector<double> history;
};

/// Alternating maximization of |<target| (x)_j v_j |branch>| over single-qubit
/// unitaries; each v_j update is the polar unitary of its 2x2 environment.
CorrectionResult optimize_corrections(const Ket& branch, const Ket& target,
                                      const OptimizerOptions& opts = {});

struct ProductOverlapResult {
  std::vector<Ket> factors;  // single-qubit states xi_j
  Ket product;
  double overlap_sq = 0.0;  // |<(x) xi_j | target>|^2
};

/// Maximum squared overlap of `target` with a fully product state
/// (32 random restarts by default).
ProductOverlapResult optimize_product_overlap(const Ket& target, int restarts = 32,
                                              std::uint64_t seed = 0);

// --------------------------------------------------------- dictionary search

enum class CorrectionsMode { Dictionary, Optimized };

struct StrategyDictionary {
  std::vector<Unitary2> bases;
  std::vector<std::string> labels;
  CorrectionsMode corrections_mode = CorrectionsMode::Optimized;

  /// Z, X, Y bases plus the eight equatorial angles k*pi/4.
  static StrategyDictionary standard(CorrectionsMode mode = CorrectionsMode::Optimized);
  /// Z, X and Y bases only.
  static StrategyDictionary pauli_bases(CorrectionsMode mode = CorrectionsMode::Optimized);
};

struct SearchLimits {
  int max_measured = 3;
  int max_w = 2;
  std::size_t max_bases = 16;
  int max_dictionary_outputs = 8;  // exhaustive Pauli corrections: 4^n words
};

struct SearchResult {
  StrategyTable best;
  /// Per witness, the largest fidelity any table achieves.
  std::vector<YEvaluation> best_per_y;
  /// max over tables of min over y of F (= min over y of best_per_y).
  double best_min_fidelity = 0.0;
  BitString weakest_y;
  /// Set when every table has some y with F <= epsilon, hence d_y >= 1 - eps.
  bool non_universality_certified = false;
  /// log2 of the number of adaptive basis tables covered.
  double log2_tables = 0.0;
  std::size_t leaves_evaluated = 0;
};

/// Exact maximization over all adaptive basis tables drawn from `dict`
/// (expectimax over the outcome tree; distinct prefixes choose independently)
/// with corrections optimized per (y, m).
SearchResult strategy_search(const ResourceState& res, const UnitaryFamily& fam,
                             const StrategyDictionary& dict, const PrecisionParams& prec,
                             const SearchLimits& limits = {},
                             const OptimizerOptions& opt = {});

/// Best per-branch correction for the given mode; returns (corrections, overlap).
CorrectionResult best_corrections(const Ket& branch, const Ket& target, CorrectionsMode mode,
                                  const OptimizerOptions& opt = {}, int max_dictionary_outputs = 8);

}  // namespace mbqc
