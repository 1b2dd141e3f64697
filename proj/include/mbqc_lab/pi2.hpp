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

// Two-quantifier verifier: strategies are encoded as lambda-bit strings, the
// verifier rotates the protocol output back by U_y^dagger and rejects iff every
// qubit reads 0.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mbqc_lab/engine.hpp"
#include "mbqc_lab/universality.hpp"

namespace mbqc {

struct QPi2Params {
  double a = 0.75;  // acceptance threshold
  double b = 0.25;  // rejection threshold
  int max_lambda = 16;
  int max_w = 8;

  /// a = 1 - 2 eps, b = 2 eps.
  static QPi2Params from_epsilon(double epsilon);
  /// Throws UsageError unless 0 <= b < a <= 1.
  void validate() const;
};

/// Correction choice available to an encoded strategy; may depend on y.
struct CorrectionRule {
  std::string name;
  std::function<std::vector<Unitary2>(const BitString& y, int num_output)> apply;

  static CorrectionRule identity();
  /// X on output positions j < w where y_j = 1.
  static CorrectionRule witness_flip();
};

/// Fixed-width encoding of strategy tables.
///
/// Slots are grouped per witness y (in lexicographic order); within a group,
/// one basis index per (step, prefix) followed by one correction index per
/// outcome string m. Slot values are read least-significant-bit first from
/// the code and wrap modulo the dictionary size, so every code decodes.
struct StrategyEncoding {
  int w = 0;
  int num_measured = 0;
  int num_output = 0;
  std::vector<Unitary2> bases;
  std::vector<std::string> basis_labels;
  std::vector<CorrectionRule> corrections;

  /// Z, X, Y and the pi/4 equatorial basis; identity or witness-flip
  /// corrections. Fits lambda = 16 for one measured qubit and w = 2.
  static StrategyEncoding standard(const ResourceState& res, int w);

  int basis_bits() const;
  int correction_bits() const;
  int bits_per_y() const;
  int lambda() const;

  StrategyTable decode(std::uint64_t code) const;
  /// The bits of `code` that the strategy consults for witness number y_index.
  std::uint64_t slice(std::uint64_t code, std::uint64_t y_index) const;
};

/// 1 - <0^n| U_y^dagger rho U_y |0^n>, rho the protocol's output mixture.
double pi2_accept_prob(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                       const BitString& y, const EngineOptions& opts = {});

struct SandwichResult {
  double p = 0.0;
  double d = 0.0;
  double lower = 0.0;  // 1 - sqrt(1 - p)
  double upper = 0.0;  // sqrt(p)
  bool holds = false;
};

SandwichResult sandwich_check(const ResourceState& res, const Strategy& strat,
                              const UnitaryFamily& fam, const BitString& y,
                              const EngineOptions& opts = {});

struct Pi2Row {
  std::uint64_t code = 0;
  double max_p = 0.0;
  double min_p = 0.0;
  BitString argmax_y;
};

struct Pi2Decision {
  enum class Kind { InL, NotInL, Undetermined };

  Kind kind = Kind::Undetermined;
  double a = 0.0;
  double b = 0.0;
  int lambda = 0;
  std::vector<Pi2Row> rows;
  /// For NotInL: the first code whose every y has p <= b. For InL and
  /// Undetermined: the code with the smallest max_p.
  std::uint64_t decisive_code = 0;
};

std::string to_string(Pi2Decision::Kind k);

/// InL if every code has some y with p >= a; NotInL if some code has p <= b
/// for all y; Undetermined otherwise. Exhaustive over 2^{lambda + w} pairs.
Pi2Decision decide_qpi2(const ResourceState& res, const UnitaryFamily& fam,
                        const StrategyEncoding& enc, const QPi2Params& params, int threads = 1);

}  // namespace mbqc
