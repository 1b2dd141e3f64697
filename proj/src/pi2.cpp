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

#include "mbqc_lab/pi2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mbqc_lab/errors.hpp"
#include "mbqc_lab/parallel.hpp"

namespace mbqc {

QPi2Params QPi2Params::from_epsilon(double epsilon) {
  QPi2Params p;
  p.a = 1.0 - 2.0 * epsilon;
  p.b = 2.0 * epsilon;
  return p;
}

void QPi2Params::validate() const {
  if (!(b >= 0.0 && b < a && a <= 1.0)) {
    throw UsageError("thresholds must satisfy 0 <= b < a <= 1 (got a = " + std::to_string(a) +
                     ", b = " + std::to_string(b) + ")");
  }
}

CorrectionRule CorrectionRule::identity() {
  return {"identity", [](const BitString&, int n) {
            return std::vector<Unitary2>(static_cast<std::size_t>(n));
          }};
}

CorrectionRule CorrectionRule::witness_flip() {
  return {"witness_flip", [](const BitString& y, int n) {
            std::vector<Unitary2> vs(static_cast<std::size_t>(n));
            for (std::size_t j = 0; j < y.size() && j < vs.size(); ++j) {
              if (y[j] == '1') vs[j] = Unitary2::pauli_x();
            }
            return vs;
          }};
}

namespace {

int bits_for(std::size_t count) {
  int b = 0;
  while ((std::size_t{1} << b) < count) ++b;
  return b;
}

}  // namespace

StrategyEncoding StrategyEncoding::standard(const ResourceState& res, int w) {
  StrategyEncoding e;
  e.w = w;
  e.num_measured = res.num_measured();
  e.num_output = res.num_output;
  e.bases = {Unitary2::identity(), Unitary2::hadamard(), Unitary2::phase_s() * Unitary2::hadamard(),
             Unitary2::equatorial(std::numbers::pi / 4)};
  e.basis_labels = {"Z", "X", "Y", "EQ1pi/4"};
  e.corrections = {CorrectionRule::identity(), CorrectionRule::witness_flip()};
  return e;
}

int StrategyEncoding::basis_bits() const { return bits_for(bases.size()); }
int StrategyEncoding::correction_bits() const { return bits_for(corrections.size()); }

int StrategyEncoding::bits_per_y() const {
  const int basis_slots = (1 << num_measured) - 1;
  const int correction_slots = 1 << num_measured;
  return basis_slots * basis_bits() + correction_slots * correction_bits();
}

int StrategyEncoding::lambda() const { return (1 << w) * bits_per_y(); }

std::uint64_t StrategyEncoding::slice(std::uint64_t code, std::uint64_t y_index) const {
  const int width = bits_per_y();
  if (width == 0) return 0;
  return (code >> (static_cast<int>(y_index) * width)) & ((std::uint64_t{1} << width) - 1);
}

StrategyTable StrategyEncoding::decode(std::uint64_t code) const {
  if (bases.empty() || corrections.empty()) throw UsageError("encoding has an empty dictionary");
  StrategyTable t;
  t.w = w;
  t.num_measured = num_measured;
  t.num_output = num_output;
  const int bb = basis_bits(), cb = correction_bits();
  for (const BitString& y : all_bit_strings(w)) {
    std::uint64_t s = slice(code, from_bits(y));
    auto take = [&s](int width) {
      const std::uint64_t v = s & ((std::uint64_t{1} << width) - 1);
      s >>= width;
      return v;
    };
    for (int step = 1; step <= num_measured; ++step) {
      for (const BitString& prefix : all_bit_strings(step - 1)) {
        const std::uint64_t idx = take(bb) % bases.size();
        t.bases.emplace(StrategyTable::basis_key(step, y, prefix), bases[idx]);
      }
    }
    for (const BitString& m : all_bit_strings(num_measured)) {
      const std::uint64_t idx = take(cb) % corrections.size();
      t.corrections.emplace(StrategyTable::correction_key(y, m),
                            corrections[idx].apply(y, num_output));
    }
  }
  return t;
}

double pi2_accept_prob(const ResourceState& res, const Strategy& strat, const UnitaryFamily& fam,
                       const BitString& y, const EngineOptions& opts) {
  if (fam.n != res.num_output) throw InvariantError("family and resource output sizes differ");
  const OutputMixture mix = run_all_branches(res, strat, y, opts);
  const Ket target = fam.target(y);
  double reject = 0.0;
  for (const Branch& b : mix.branches) reject += b.probability * std::norm(inner(target, b.post_state));
  return std::clamp(1.0 - reject, 0.0, 1.0);
}

SandwichResult sandwich_check(const ResourceState& res, const Strategy& strat,
                              const UnitaryFamily& fam, const BitString& y,
                              const EngineOptions& opts) {
  SandwichResult s;
  s.p = pi2_accept_prob(res, strat, fam, y, opts);
  EvalOptions eo;
  eo.engine = opts;
  s.d = distance_for_y(res, strat, fam, y, eo);
  s.lower = 1.0 - std::sqrt(1.0 - s.p);
  s.upper = std::sqrt(s.p);
  s.holds = s.lower - tol::kCompare <= s.d && s.d <= s.upper + tol::kCompare;
  return s;
}

std::string to_string(Pi2Decision::Kind k) {
  switch (k) {
    case Pi2Decision::Kind::InL: return "InL";
    case Pi2Decision::Kind::NotInL: return "NotInL";
    case Pi2Decision::Kind::Undetermined: return "Undetermined";
  }
  return "?";
}

Pi2Decision decide_qpi2(const ResourceState& res, const UnitaryFamily& fam,
                        const StrategyEncoding& enc, const QPi2Params& params, int threads) {
  params.validate();
  if (enc.w != fam.w || enc.num_output != res.num_output || enc.num_measured != res.num_measured()) {
    throw InvariantError("encoding shape does not match the resource and family");
  }
  const int lambda = enc.lambda();
  if (lambda > params.max_lambda || fam.w > params.max_w) {
    throw CapExceeded("quantifier space 2^(lambda + w) with lambda = " + std::to_string(lambda) +
                      ", w = " + std::to_string(fam.w) + " exceeds the cap (lambda <= " +
                      std::to_string(params.max_lambda) + ", w <= " +
                      std::to_string(params.max_w) + ")");
  }

  // p depends on y's slice of the code only; tabulated per (y, slice).
  const std::vector<BitString> ys = all_bit_strings(fam.w);
  const int width = enc.bits_per_y();
  const std::size_t slices = std::size_t{1} << width;
  std::vector<double> p(ys.size() * slices);
  parallel_for(p.size(), threads, [&](std::size_t idx) {
    const std::size_t yi = idx / slices;
    const std::uint64_t s = idx % slices;
    const std::uint64_t code = s << (static_cast<int>(yi) * width);
    const Strategy strat = enc.decode(code).to_strategy();
    p[idx] = pi2_accept_prob(res, strat, fam, ys[yi]);
  });

  Pi2Decision out;
  out.a = params.a;
  out.b = params.b;
  out.lambda = lambda;
  const std::uint64_t codes = std::uint64_t{1} << lambda;
  out.rows.reserve(codes);
  bool every_code_has_accepting_y = true;
  bool found_rejecting_code = false;
  double smallest_max = 2.0;
  for (std::uint64_t code = 0; code < codes; ++code) {
    Pi2Row row{code, -1.0, 2.0, ""};
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
      const double v = p[yi * slices + enc.slice(code, yi)];
      if (v > row.max_p) {
        row.max_p = v;
        row.argmax_y = ys[yi];
      }
      row.min_p = std::min(row.min_p, v);
    }
    if (row.max_p < params.a - tol::kCompare) every_code_has_accepting_y = false;
    if (row.max_p <= params.b + tol::kCompare && !found_rejecting_code) {
      found_rejecting_code = true;
      out.decisive_code = code;
    }
    if (!found_rejecting_code && row.max_p < smallest_max) {
      smallest_max = row.max_p;
      out.decisive_code = code;
    }
    out.rows.push_back(std::move(row));
  }
  if (every_code_has_accepting_y) {
    out.kind = Pi2Decision::Kind::InL;
  } else if (found_rejecting_code) {
    out.kind = Pi2Decision::Kind::NotInL;
  } else {
    out.kind = Pi2Decision::Kind::Undetermined;
  }
  return out;
}

}  // namespace mbqc
