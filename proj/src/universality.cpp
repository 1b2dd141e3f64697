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

#include "mbqc_lab/universality.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "mbqc_lab/errors.hpp"
#include "mbqc_lab/parallel.hpp"

namespace mbqc {

// ------------------------------------------------------------------ families

Ket UnitaryFamily::target(const BitString& y) const {
  if (static_cast<int>(y.size()) != w) {
    throw InvariantError("witness '" + y + "' does not have length " + std::to_string(w));
  }
  const Circuit c = member(y);
  if (c.num_qubits != n) throw InvariantError("family member has the wrong qubit count");
  return apply_circuit(Ket(n), c);
}

UnitaryFamily family_from_circuits(int w, std::vector<Circuit> members) {
  if (members.size() != (std::size_t{1} << w) || members.empty()) {
    throw InvariantError("family needs exactly 2^w members");
  }
  const int n = members.front().num_qubits;
  for (const Circuit& c : members) {
    if (c.num_qubits != n) throw InvariantError("family members act on different qubit counts");
    c.validate();
  }
  auto shared = std::make_shared<const std::vector<Circuit>>(std::move(members));
  return {w, n, [shared](const BitString& y) { return (*shared)[from_bits(y)]; }};
}

UnitaryFamily cluster_family(const std::vector<EulerAngles>& angles_per_y) {
  int w = 0;
  while ((std::size_t{1} << w) < angles_per_y.size()) ++w;
  std::vector<Circuit> members;
  for (const EulerAngles& a : angles_per_y) members.push_back(euler_target_circuit(a));
  return family_from_circuits(w, std::move(members));
}

PrecisionParams PrecisionParams::from_t(int t) {
  if (t < 1) throw ParameterError("precision exponent t must be a positive integer");
  return {std::ldexp(1.0, -t), t};
}

PrecisionParams PrecisionParams::from_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw ParameterError("epsilon must lie in (0, 1/2]");
  return {epsilon, std::nullopt};
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Universal: return "Universal";
    case Verdict::Kind::NonUniversal: return "NonUniversal";
    case Verdict::Kind::OutsidePromise: return "OutsidePromise";
  }
  return "?";
}

// --------------------------------------------------------------- evaluation

YEvaluation evaluate_y(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                       const BitString& y, const EvalOptions& opts) {
  if (fam.n != res.num_output) {
    throw InvariantError("family acts on " + std::to_string(fam.n) + " qubits, resource outputs " +
                         std::to_string(res.num_output));
  }
  const OutputMixture mix = run_all_branches(res, strat, y, opts.engine);
  const Ket target = fam.target(y);
  double f2 = 0.0;
  for (const Branch& b : mix.branches) f2 += b.probability * std::norm(inner(b.post_state, target));
  const auto w = mix.weights();
  const auto k = mix.kets();
  return {y, trace_distance_to_pure(w, k, target), std::sqrt(std::clamp(f2, 0.0, 1.0))};
}

double distance_for_y(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                      const BitString& y, const EvalOptions& opts) {
  return evaluate_y(res, strat, fam, y, opts).distance;
}

double fidelity_for_y(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                      const BitString& y, const EvalOptions& opts) {
  return evaluate_y(res, strat, fam, y, opts).fidelity;
}

Verdict check_universality(const ResourceState& res, const Strategy& strat,
                           const UnitaryFamily& fam, const PrecisionParams& prec,
                           const EvalOptions& opts) {
  if (fam.w > 12) throw CapExceeded("witness length above 12");
  const std::vector<BitString> ys = all_bit_strings(fam.w);
  Verdict v;
  v.epsilon = prec.epsilon;
  v.per_y.resize(ys.size());
  parallel_for(ys.size(), opts.threads,
               [&](std::size_t i) { v.per_y[i] = evaluate_y(res, strat, fam, ys[i], opts); });

  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.per_y.size(); ++i) {
    if (v.per_y[i].distance > v.per_y[arg].distance) arg = i;
  }
  v.y = v.per_y[arg].y;
  v.distance = v.per_y[arg].distance;
  const double eps = prec.epsilon;
  if (v.distance <= eps + tol::kCompare) {
    v.kind = Verdict::Kind::Universal;
    std::mt19937_64 rng(opts.seed);
    const BitString probe = ys[std::uniform_int_distribution<std::size_t>(0, ys.size() - 1)(rng)];
    if (distance_for_y(res, strat, fam, probe, opts) > eps + tol::kCompare) {
      throw InvariantError("Universal verdict failed its re-check at y = " + probe);
    }
  } else if (v.distance >= 1.0 - eps - tol::kCompare) {
    v.kind = Verdict::Kind::NonUniversal;
    const double again = distance_for_y(res, strat, fam, v.y, opts);
    if (std::abs(again - v.distance) > tol::kCompare) {
      throw InvariantError("NonUniversal verdict failed its re-check at y = " + v.y);
    }
  } else {
    v.kind = Verdict::Kind::OutsidePromise;
  }
  return v;
}

// --------------------------------------------------------------- optimizers

namespace {

// M(b, a) = sum_rest phi[rest, b] * conj(target[rest, a]) for qubit j, so that
// <target| v_j |phi> = trace(v_j M).
Matrix2 environment(const Vector& phi, const Vector& target, int n, int j) {
  const std::uint64_t bit = std::uint64_t{1} << (n - 1 - j);
  Matrix2 m = Matrix2::Zero();
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(phi.size()); ++i) {
    if (i & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | bit);
    const Complex t0 = std::conj(target[i0]), t1 = std::conj(target[i1]);
    m(0, 0) += phi[i0] * t0;
    m(0, 1) += phi[i0] * t1;
    m(1, 0) += phi[i1] * t0;
    m(1, 1) += phi[i1] * t1;
  }
  return m;
}

// Unitary v maximizing |trace(v M)|: with M = W S V^dagger, v = V W^dagger.
Unitary2 polar_maximizer(const Matrix2& m) {
  Eigen::JacobiSVD<Matrix2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix2 v = svd.matrixV() * svd.matrixU().adjoint();
  return Unitary2(v);
}

struct StartResult {
  std::vector<Unitary2> vs;
  double overlap = 0.0;
  std::vector<double> history;
};

StartResult ascend(const Ket& branch, const Ket& target, std::vector<Unitary2> vs,
                   const OptimizerOptions& opts) {
  const int n = branch.num_qubits();
  Ket cur = apply_local(branch, vs);
  StartResult r;
  double overlap = std::abs(inner(target, cur));
  if (opts.record_history) r.history.push_back(overlap);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double before = overlap;
    for (int j = 0; j < n; ++j) {
      const Ket phi = apply_unitary2(cur, j, vs[static_cast<std::size_t>(j)].adjoint());
      const Unitary2 v = polar_maximizer(environment(phi.amplitudes(), target.amplitudes(), n, j));
      vs[static_cast<std::size_t>(j)] = v;
      cur = apply_unitary2(phi, j, v);
      overlap = std::abs(inner(target, cur));
      if (opts.record_history) r.history.push_back(overlap);
    }
    if (overlap - before < opts.min_gain) break;
  }
  r.vs = std::move(vs);
  r.overlap = overlap;
  return r;
}

}  // namespace

CorrectionResult optimize_corrections(const Ket& branch, const Ket& target,
                                      const OptimizerOptions& opts) {
  if (branch.num_qubits() != target.num_qubits()) {
    throw InvariantError("optimize_corrections: dimension mismatch");
  }
  const auto n = static_cast<std::size_t>(branch.num_qubits());
  std::mt19937_64 rng(opts.seed);
  CorrectionResult best;
  bool have = false;
  for (int start = 0; start <= opts.restarts; ++start) {
    std::vector<Unitary2> init(n);
    if (start > 0) {
      for (auto& u : init) u = Unitary2::random(rng);
    }
    StartResult r = ascend(branch, target, std::move(init), opts);
    if (!have || r.overlap > best.overlap + 1e-15) {
      best.corrections = std::move(r.vs);
      best.overlap = r.overlap;
      best.history = std::move(r.history);
      have = true;
    }
  }
  best.overlap = std::min(best.overlap, 1.0);
  return best;
}

ProductOverlapResult optimize_product_overlap(const Ket& target, int restarts, std::uint64_t seed) {
  if (target.num_qubits() > 11) throw CapExceeded("optimize_product_overlap supports <= 11 qubits");
  OptimizerOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  const CorrectionResult c = optimize_corrections(Ket(target.num_qubits()), target, opts);
  ProductOverlapResult out;
  Ket product(0);
  for (const Unitary2& v : c.corrections) {
    const Ket xi = Ket::from_amplitudes_unchecked(v.matrix().col(0));
    out.factors.push_back(xi);
    product = tensor(product, xi);
  }
  out.product = product;
  out.overlap_sq = std::norm(inner(product, target));
  return out;
}

CorrectionResult best_corrections(const Ket& branch, const Ket& target, CorrectionsMode mode,
                                  const OptimizerOptions& opt, int max_dictionary_outputs) {
  if (mode == CorrectionsMode::Optimized) return optimize_corrections(branch, target, opt);
  const int n = branch.num_qubits();
  if (n > max_dictionary_outputs) {
    throw CapExceeded("Pauli-dictionary corrections limited to " +
                      std::to_string(max_dictionary_outputs) + " output qubits");
  }
  const Unitary2 paulis[4] = {Unitary2::identity(), Unitary2::pauli_x(), Unitary2::pauli_y(),
                              Unitary2::pauli_z()};
  CorrectionResult best;
  best.overlap = -1.0;
  std::vector<Unitary2> word(static_cast<std::size_t>(n));
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * n)); ++code) {
    for (int q = 0; q < n; ++q) word[static_cast<std::size_t>(q)] = paulis[(code >> (2 * q)) & 3U];
    const double ov = std::abs(inner(target, apply_local(branch, word)));
    if (ov > best.overlap + 1e-15) {
      best.overlap = ov;
      best.corrections = word;
    }
  }
  return best;
}

// ---------------------------------------------------------------- dictionary

StrategyDictionary StrategyDictionary::pauli_bases(CorrectionsMode mode) {
  StrategyDictionary d;
  d.corrections_mode = mode;
  d.bases = {Unitary2::identity(), Unitary2::hadamard(), Unitary2::phase_s() * Unitary2::hadamard()};
  d.labels = {"Z", "X", "Y"};
  return d;
}

StrategyDictionary StrategyDictionary::standard(CorrectionsMode mode) {
  StrategyDictionary d = pauli_bases(mode);
  for (int k = 0; k < 8; ++k) {
    d.bases.push_back(Unitary2::equatorial(k * std::numbers::pi / 4));
    d.labels.push_back("EQ" + std::to_string(k) + "pi/4");
  }
  return d;
}

namespace {

struct SubtreeChoice {
  double value = 0.0;  // expected squared overlap below this node
  std::map<std::string, Unitary2> bases;
  std::map<std::string, std::vector<Unitary2>> corrections;
  std::size_t leaves = 0;
};

struct Searcher {
  const StrategyDictionary& dict;
  const BitString& y;
  const Ket& target;
  int num_measured;
  const OptimizerOptions& opt;
  int max_dictionary_outputs;

  SubtreeChoice solve(const Ket& state, const BitString& prefix) const {
    const int step = static_cast<int>(prefix.size()) + 1;
    SubtreeChoice out;
    if (step > num_measured) {
      CorrectionResult c =
          best_corrections(state, target, dict.corrections_mode, opt, max_dictionary_outputs);
      out.value = c.overlap * c.overlap;
      out.corrections.emplace(StrategyTable::correction_key(y, prefix), std::move(c.corrections));
      out.leaves = 1;
      return out;
    }
    bool have = false;
    std::size_t leaves = 0;
    for (const Unitary2& u : dict.bases) {
      SubtreeChoice cand;
      cand.bases.emplace(StrategyTable::basis_key(step, y, prefix), u);
      for (auto& br : measure_in_basis(state, 0, u)) {
        if (br.zero) continue;
        SubtreeChoice child = solve(*br.post_state, prefix + static_cast<char>('0' + br.outcome));
        cand.value += br.probability * child.value;
        cand.bases.merge(child.bases);
        cand.corrections.merge(child.corrections);
        leaves += child.leaves;
      }
      if (!have || cand.value > out.value + 1e-12) {
        out = std::move(cand);
        have = true;
      }
    }
    out.leaves = leaves;
    return out;
  }
};

}  // namespace

SearchResult strategy_search(const ResourceState& res, const UnitaryFamily& fam,
                             const StrategyDictionary& dict, const PrecisionParams& prec,
                             const SearchLimits& limits, const OptimizerOptions& opt) {
  if (dict.bases.empty()) throw UsageError("strategy_search: empty basis dictionary");
  if (fam.n != res.num_output) throw InvariantError("family and resource output sizes differ");
  const int k = res.num_measured();
  if (k > limits.max_measured || fam.w > limits.max_w || dict.bases.size() > limits.max_bases) {
    throw CapExceeded("strategy_search: search space exceeds the configured cap (measured <= " +
                      std::to_string(limits.max_measured) + ", w <= " +
                      std::to_string(limits.max_w) + ", bases <= " +
                      std::to_string(limits.max_bases) + ")");
  }

  SearchResult out;
  out.best.w = fam.w;
  out.best.num_measured = k;
  out.best.num_output = res.num_output;
  out.log2_tables = std::ldexp(1.0, fam.w) * (std::ldexp(1.0, k) - 1.0) *
                    std::log2(static_cast<double>(dict.bases.size()));

  double min_f = 2.0;
  for (const BitString& y : all_bit_strings(fam.w)) {
    const Ket target = fam.target(y);
    Searcher s{dict, y, target, k, opt, limits.max_dictionary_outputs};
    SubtreeChoice best = s.solve(res.state, "");
    const double f = std::sqrt(std::clamp(best.value, 0.0, 1.0));
    out.best.bases.merge(best.bases);
    out.best.corrections.merge(best.corrections);
    out.leaves_evaluated += best.leaves;

    // Distance of the per-y optimum, from a fresh engine run of the table.
    YEvaluation ev{y, 0.0, f};
    out.best_per_y.push_back(ev);
    if (f < min_f - 1e-15) {
      min_f = f;
      out.weakest_y = y;
    }
  }
  const Strategy best_strategy = out.best.to_strategy();
  for (YEvaluation& ev : out.best_per_y) {
    ev.distance = distance_for_y(res, best_strategy, fam, ev.y);
  }
  out.best_min_fidelity = min_f;
  out.non_universality_certified = min_f <= prec.epsilon + tol::kCompare;
  return out;
}

}  // namespace mbqc
