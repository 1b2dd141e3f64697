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


#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "mbqc_lab/engine.hpp"
#include "mbqc_lab/errors.hpp"
#include "mbqc_lab/universality.hpp"
#include "oracles.hpp"

using namespace mbqc;

namespace {

// Branch probabilities from the full resource vector: apply the chosen
// basis projectors one qubit at a time without ever discarding qubits.
std::map<BitString, std::pair<double, oracle::Vec>> oracle_branches(const ResourceState& res,
                                                                    const Strategy& s,
                                                                    const BitString& y) {
  const int n = res.num_qubits();
  const int k = res.num_measured();
  std::map<BitString, std::pair<double, oracle::Vec>> out;
  for (const BitString& m : all_bit_strings(k)) {
    oracle::Vec v = res.state.amplitudes();
    for (int j = 0; j < k; ++j) {
      const Unitary2 u = s.next_basis(j + 1, y, m.substr(0, static_cast<std::size_t>(j)));
      v = oracle::projector(j, n, m[j] - '0') * oracle::embed(u.matrix().adjoint(), j, n) * v;
    }
    const double p = v.squaredNorm();
    if (p < 1e-12) continue;
    oracle::Vec tail(Eigen::Index{1} << (n - k));
    const std::size_t offset = from_bits(m) << (n - k);
    for (Eigen::Index i = 0; i < tail.size(); ++i) tail[i] = v[static_cast<Eigen::Index>(offset) + i];
    tail /= tail.norm();
    const auto vs = s.corrections(y, m);
    for (int q = 0; q < n - k; ++q) tail = oracle::embed(vs[q].matrix(), q, n - k) * tail;
    out[m] = {p, tail};
  }
  return out;
}

ResourceState random_resource(int n, int outputs, std::mt19937_64& rng) {
  return {Ket::random(n, rng), outputs};
}

Strategy random_table_strategy(int w, int k, int outputs, std::mt19937_64& rng) {
  StrategyTable t;
  t.w = w;
  t.num_measured = k;
  t.num_output = outputs;
  for (const BitString& y : all_bit_strings(w)) {
    for (int j = 1; j <= k; ++j)
      for (const BitString& pre : all_bit_strings(j - 1))
        t.bases.emplace(StrategyTable::basis_key(j, y, pre), Unitary2::random(rng));
    for (const BitString& m : all_bit_strings(k)) {
      std::vector<Unitary2> v;
      for (int q = 0; q < outputs; ++q) v.push_back(Unitary2::random(rng));
      t.corrections.emplace(StrategyTable::correction_key(y, m), v);
    }
  }
  return t.to_strategy();
}

}  // namespace

TEST_CASE("run_all_branches agrees with projector oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 4;
    const int outputs = 1 + trial % (n - 1 == 0 ? 1 : n - 1);
    const ResourceState res = random_resource(n, outputs, rng);
    const Strategy s = random_table_strategy(1, res.num_measured(), outputs, rng);
    for (const BitString& y : {"0", "1"}) {
      const OutputMixture mix = run_all_branches(res, s, y);
      const auto expect = oracle_branches(res, s, y);
      REQUIRE(mix.branches.size() == expect.size());
      for (const Branch& b : mix.branches) {
        const auto& [p, v] = expect.at(b.m);
        CHECK(b.probability == doctest::Approx(p).epsilon(1e-12));
        CHECK((b.post_state.amplitudes() - v).norm() < 1e-10);
      }
      CHECK(mix.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("trivial resource gives one branch") {
  const ResourceState res{Ket::plus(), 1};
  Strategy s;
  s.next_basis = [](int, const BitString&, const BitString&) { return Unitary2{}; };
  s.corrections = [](const BitString&, const BitString&) { return std::vector<Unitary2>(1); };
  const OutputMixture mix = run_all_branches(res, s, "");
  REQUIRE(mix.branches.size() == 1);
  CHECK(mix.branches[0].m.empty());
  CHECK(mix.branches[0].probability == 1.0);
}

TEST_CASE("branch cap raises CapExceeded") {
  std::mt19937_64 rng(2);
  const ResourceState res = random_resource(4, 1, rng);
  const Strategy s = random_table_strategy(0, 3, 1, rng);
  EngineOptions eo;
  eo.max_branches = 4;
  CHECK_THROWS_AS(run_all_branches(res, s, "", eo), CapExceeded);
}

TEST_CASE("strategy returning the wrong number of corrections is rejected") {
  std::mt19937_64 rng(3);
  const ResourceState res = random_resource(3, 2, rng);
  Strategy s = random_table_strategy(0, 1, 2, rng);
  s.corrections = [](const BitString&, const BitString&) { return std::vector<Unitary2>(1); };
  CHECK_THROWS_AS(run_all_branches(res, s, ""), InvariantError);
}

TEST_CASE("missing basis entry is an invariant error") {
  StrategyTable t;
  t.num_measured = 1;
  t.num_output = 1;
  std::mt19937_64 rng(4);
  CHECK_THROWS_AS(run_all_branches(random_resource(2, 1, rng), t.to_strategy(), ""), InvariantError);
  t.default_basis = Unitary2::hadamard();
  CHECK(run_all_branches(random_resource(2, 1, rng), t.to_strategy(), "").branches.size() == 2);
}

TEST_CASE("sample_run follows a branch of the enumeration") {
  std::mt19937_64 rng(8);
  const ResourceState res = random_resource(4, 1, rng);
  const Strategy s = random_table_strategy(1, 3, 1, rng);
  const OutputMixture mix = run_all_branches(res, s, "1");
  std::map<BitString, std::size_t> counts;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const Branch b = sample_run(res, s, "1", seed);
    ++counts[b.m];
    if (seed < 20) {
      const auto it = std::find_if(mix.branches.begin(), mix.branches.end(),
                                   [&](const Branch& x) { return x.m == b.m; });
      REQUIRE(it != mix.branches.end());
      CHECK(b.probability == doctest::Approx(it->probability).epsilon(1e-12));
      CHECK(std::abs(std::abs(inner(b.post_state, it->post_state)) - 1.0) < 1e-10);
    }
  }
  // Loose frequency check: 6 sigma of a binomial with 4000 draws.
  for (const Branch& b : mix.branches) {
    const double f = static_cast<double>(counts[b.m]) / 4000.0;
    CHECK(std::abs(f - b.probability) < 6.0 * std::sqrt(b.probability * (1 - b.probability) / 4000.0) + 1e-3);
  }
  CHECK(sample_run(res, s, "1", 77).m == sample_run(res, s, "1", 77).m);
}

TEST_CASE("graph state construction") {
  const Ket g = build_graph_state(2, {{0, 1}});
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(g[i]) == doctest::Approx(0.5));
  CHECK(g[3].real() == doctest::Approx(-0.5));
  CHECK_THROWS_AS(build_graph_state(3, {{1, 1}}), InvariantError);
  CHECK_THROWS_AS(build_graph_state(3, {{0, 1}, {1, 0}}), InvariantError);
  CHECK_THROWS_AS(build_graph_state(3, {{0, 3}}), InvariantError);
}

TEST_CASE("cluster fixture realizes its Euler-angle targets") {
  const auto angles = default_cluster_angles();
  const ResourceState res = cluster_resource();
  const Strategy s = cluster_strategy(res, angles);
  const UnitaryFamily fam = cluster_family(angles);
  for (const BitString& y : all_bit_strings(2)) {
    const OutputMixture mix = run_all_branches(res, s, y);
    REQUIRE(mix.branches.size() == 16);
    const Ket target = fam.target(y);
    for (const Branch& b : mix.branches) {
      CHECK(std::abs(b.probability - 1.0 / 16.0) < 1e-10);
      CHECK(std::abs(std::abs(inner(target, b.post_state)) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("cluster strategy table matches the callback form") {
  const auto angles = default_cluster_angles();
  const Strategy a = cluster_strategy(angles);
  const Strategy b = cluster_strategy_table(angles).to_strategy();
  const ResourceState res = cluster_resource();
  for (const BitString& y : all_bit_strings(2)) {
    const OutputMixture ma = run_all_branches(res, a, y);
    const OutputMixture mb = run_all_branches(res, b, y);
    REQUIRE(ma.branches.size() == mb.branches.size());
    for (std::size_t i = 0; i < ma.branches.size(); ++i) {
      CHECK((ma.branches[i].post_state.amplitudes() - mb.branches[i].post_state.amplitudes()).norm() < 1e-14);
    }
  }
}

TEST_CASE("cluster strategy rejects other resources") {
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(cluster_strategy(random_resource(5, 1, rng), default_cluster_angles()), InvariantError);
  CHECK_THROWS_AS(cluster_strategy(ResourceState{Ket(4), 1}, default_cluster_angles()), InvariantError);
  CHECK_THROWS_AS(cluster_strategy(std::vector<EulerAngles>(3)), InvariantError);
}

TEST_CASE("output mixture density") {
  const auto angles = default_cluster_angles();
  const OutputMixture mix = run_all_branches(cluster_resource(), cluster_strategy(angles), "10");
  const DensityOp rho = mix.density();
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_with_pure(rho, cluster_family(angles).target("10")) == doctest::Approx(1.0).epsilon(1e-10));
}

namespace {

Strategy fixed_strategy(const Unitary2& u, int outputs) {
  Strategy s;
  s.next_basis = [u](int, const BitString&, const BitString&) { return u; };
  s.corrections = [outputs](const BitString&, const BitString&) {
    return std::vector<Unitary2>(static_cast<std::size_t>(outputs));
  };
  return s;
}

}  // namespace

TEST_CASE("engine worked examples") {
  const OutputMixture a = run_all_branches({Ket(2), 1}, fixed_strategy(Unitary2{}, 1), "01");
  REQUIRE(a.branches.size() == 1);
  CHECK(a.branches[0].m == "0");
  CHECK(a.branches[0].probability == 1.0);

  const ResourceState path2{build_graph_state(2, {{0, 1}}), 1};
  const OutputMixture b = run_all_branches(path2, fixed_strategy(Unitary2::hadamard(), 1), "");
  REQUIRE(b.branches.size() == 2);
  for (const Branch& br : b.branches) CHECK(br.probability == doctest::Approx(0.5).epsilon(1e-12));

  const OutputMixture c = run_all_branches({tensor(Ket::plus(), Ket(1)), 1}, fixed_strategy(Unitary2::hadamard(), 1), "");
  REQUIRE(c.branches.size() == 1);
  CHECK(c.branches[0].probability == doctest::Approx(1.0));

  const ResourceState tri{build_graph_state(3, {{0, 1}, {1, 2}, {0, 2}}), 1};
  const OutputMixture d = run_all_branches(tri, fixed_strategy(Unitary2::hadamard(), 1), "");
  REQUIRE(d.branches.size() == 4);
  for (const Branch& br : d.branches) CHECK(br.probability == doctest::Approx(0.25).epsilon(1e-12));

  const Ket one = build_graph_state(1, {});
  CHECK(std::abs(inner(one, Ket::plus())) == doctest::Approx(1.0));
}

TEST_CASE("sample_run frequencies on the two-vertex graph") {
  const ResourceState path2{build_graph_state(2, {{0, 1}}), 1};
  const Strategy s = fixed_strategy(Unitary2::hadamard(), 1);
  int zeros = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) zeros += sample_run(path2, s, "", seed).m == "0";
  CHECK(std::abs(zeros / 1000.0 - 0.5) < 0.05);
  const Branch only = sample_run({Ket(2), 1}, fixed_strategy(Unitary2{}, 1), "", 12345);
  CHECK(only.m == "0");
}

TEST_CASE("graph states give uniform outcomes under equatorial bases") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  const ResourceState res{build_graph_state(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {1, 3}}), 2};
  StrategyTable t;
  t.num_measured = 3;
  t.num_output = 2;
  for (int j = 1; j <= 3; ++j)
    for (const BitString& pre : all_bit_strings(j - 1))
      t.bases.emplace(StrategyTable::basis_key(j, "", pre), Unitary2::equatorial(angle(rng)));
  const OutputMixture mix = run_all_branches(res, t.to_strategy(), "");
  REQUIRE(mix.branches.size() == 8);
  for (const Branch& b : mix.branches) CHECK(std::abs(b.probability - 0.125) < 1e-10);
}

TEST_CASE("product resources give product outputs") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    Ket state = Ket::random(1, rng);
    for (int q = 1; q < 5; ++q) state = tensor(state, Ket::random(1, rng));
    const ResourceState res{state, 3};
    const OutputMixture mix = run_all_branches(res, random_table_strategy(0, 2, 3, rng), "");
    for (const Branch& b : mix.branches) {
      for (const std::vector<int> cut : {std::vector<int>{0}, {1}, {2}, {0, 1}}) {
        CHECK(entanglement_entropy(b.post_state, cut) <= 1e-9);
      }
    }
  }
}

TEST_CASE("bases on unreachable prefixes do not matter") {
  // Qubit 0 is |0>, so prefix "1" is never reached.
  const ResourceState res{tensor(Ket(1), build_graph_state(2, {{0, 1}})), 1};
  StrategyTable t;
  t.num_measured = 2;
  t.num_output = 1;
  t.bases.emplace(StrategyTable::basis_key(1, "", ""), Unitary2{});
  t.bases.emplace(StrategyTable::basis_key(2, "", "0"), Unitary2::hadamard());
  t.bases.emplace(StrategyTable::basis_key(2, "", "1"), Unitary2{});
  const OutputMixture a = run_all_branches(res, t.to_strategy(), "");
  t.bases[StrategyTable::basis_key(2, "", "1")] = Unitary2::phase_s() * Unitary2::hadamard();
  const OutputMixture b = run_all_branches(res, t.to_strategy(), "");
  CHECK((a.density().matrix() - b.density().matrix()).cwiseAbs().maxCoeff() < 1e-12);
}
