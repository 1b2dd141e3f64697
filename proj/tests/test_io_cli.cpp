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

#include <filesystem>
#include <fstream>
#include <random>

#include "mbqc_lab/cli.hpp"
#include "mbqc_lab/errors.hpp"
#include "mbqc_lab/io.hpp"

using namespace mbqc;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mbqc_lab_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("complex and unitary round-trip") {
  const Complex c(0.25, -1.5);
  CHECK(io::complex_from_json(io::to_json(c)) == c);
  std::mt19937_64 rng(3);
  const Unitary2 u = Unitary2::random(rng);
  CHECK((io::unitary2_from_json(io::to_json(u)).matrix() - u.matrix()).norm() == 0.0);
  CHECK_THROWS_AS(io::complex_from_json(json::array({1.0})), ParseError);
}

TEST_CASE("circuit and verifier round-trip") {
  const VerifierCircuit v = amplify_verifier(rotation_verifier(1, 0.7), 3);
  const VerifierCircuit back = io::verifier_from_json(io::to_json(v));
  CHECK(back.w == v.w);
  CHECK(back.n == v.n);
  CHECK(back.name == v.name);
  CHECK(io::to_json(back) == io::to_json(v));
  CHECK(acceptance_prob(back, "1") == acceptance_prob(v, "1"));

  json bad = io::to_json(Circuit(2, {Gate::cnot(0, 1)}));
  bad["gates"][0]["kind"] = "NOPE";
  CHECK_THROWS_AS(io::circuit_from_json(bad), ParseError);
  bad["gates"][0]["kind"] = "CNOT";
  bad["gates"][0]["targets"] = json::array({0, 5});
  CHECK_THROWS_AS(io::circuit_from_json(bad), InvariantError);
}

TEST_CASE("resource formats") {
  const json graph = {{"num_qubits", 5}, {"num_output", 1}, {"graph", {{"edges", {{0, 1}, {1, 2}, {2, 3}, {3, 4}}}}}};
  const ResourceState r = io::resource_from_json(graph);
  CHECK(std::abs(inner(r.state, cluster_resource().state)) == doctest::Approx(1.0));
  const json zero = {{"num_qubits", 3}, {"num_output", 2}, {"zero", true}};
  CHECK(io::resource_from_json(zero).state[0] == Complex(1.0));
  const ResourceState back = io::resource_from_json(io::to_json(r));
  CHECK((back.state.amplitudes() - r.state.amplitudes()).norm() == 0.0);
  json two = graph;
  two["zero"] = true;
  CHECK_THROWS_AS(io::resource_from_json(two), ParseError);
  json loop = graph;
  loop["graph"]["edges"] = {{2, 2}};
  CHECK_THROWS_AS(io::resource_from_json(loop), InvariantError);
}

TEST_CASE("strategy, family and bundle round-trip") {
  const auto angles = default_cluster_angles();
  const StrategyTable t = cluster_strategy_table(angles);
  CHECK(io::to_json(io::strategy_from_json(io::to_json(t))) == io::to_json(t));

  const UnitaryFamily f = cluster_family(angles);
  const UnitaryFamily fb = io::family_from_json(io::family_to_json(f));
  for (const BitString& y : all_bit_strings(2)) {
    CHECK((fb.target(y).amplitudes() - f.target(y).amplitudes()).norm() < 1e-15);
  }

  const ReductionBundle b = build_reduction(equality_verifier("11"), 3, 1);
  const json j = io::to_json(b);
  CHECK(j["format"] == io::kBundleFormat);
  const ReductionBundle bb = io::bundle_from_json(j);
  CHECK(io::to_json(bb) == j);
  json wrong = j;
  wrong["format"] = "other";
  CHECK_THROWS_AS(io::bundle_from_json(wrong), ParseError);
}

TEST_CASE("file reading errors") {
  CHECK_THROWS_AS(io::read_json_file(scratch("missing.json")), ParseError);
  write_text(scratch("broken.json"), "{ not json");
  CHECK_THROWS_AS(io::read_json_file(scratch("broken.json")), ParseError);
}

TEST_CASE("fingerprint ignores global phase") {
  std::mt19937_64 rng(5);
  const Ket k = Ket::random(3, rng);
  const Ket phased = Ket::from_amplitudes(k.amplitudes() * std::polar(1.0, 0.77));
  CHECK(io::fingerprint(k) == io::fingerprint(phased));
  CHECK(io::fingerprint(k) != io::fingerprint(Ket::random(3, rng)));
  CHECK(io::fingerprint(k).size() == 16);
}

TEST_CASE("cmd_run reports and rejects malformed strategies") {
  const fs::path dir = scratch("cluster");
  cli::FixtureSpec spec;
  spec.kind = "cluster";
  cli::cmd_fixture(spec, dir);
  cli::Options opts;
  const cli::Result r = cli::cmd_run(dir / "cluster_resource.json", dir / "cluster_strategy.json", "01", opts);
  CHECK(r.exit_code == 0);
  CHECK(r.report["table"].size() == 16);
  CHECK(r.report["tool"] == "mbqc-lab");
  CHECK(r.report["version"] == cli::version());
  CHECK(r.report.contains("tolerances"));
  CHECK(r.report["diagnostics"]["purity"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));

  write_text(scratch("bad_strategy.json"), R"({"w": 2, "num_measured": 4, "num_output": 1, "bases": 3})");
  CHECK_THROWS_AS(cli::cmd_run(dir / "cluster_resource.json", scratch("bad_strategy.json"), "01", opts), ParseError);
  CHECK_THROWS_AS(cli::cmd_run(dir / "cluster_resource.json", dir / "cluster_strategy.json", "011", opts), UsageError);
}

TEST_CASE("reports are byte-identical across runs") {
  const fs::path dir = scratch("cluster");
  cli::FixtureSpec spec;
  spec.kind = "cluster";
  cli::cmd_fixture(spec, dir);
  cli::Options opts;
  opts.seed = 9;
  cli::CheckInputs in{std::nullopt, dir / "cluster_resource.json", dir / "cluster_strategy.json",
                      dir / "cluster_family.json"};
  const std::string a = cli::render(cli::cmd_check(in, 1e-6, std::nullopt, opts), opts);
  opts.threads = 3;
  cli::Options again = opts;
  const std::string b = cli::render(cli::cmd_check(in, 1e-6, std::nullopt, again), again);
  // The thread count is recorded in the parameters, so compare without it.
  json ja = json::parse(a), jb = json::parse(b);
  ja["parameters"].erase("threads");
  jb["parameters"].erase("threads");
  CHECK(ja.dump() == jb.dump());
  opts.threads = 1;
  CHECK(cli::render(cli::cmd_check(in, 1e-6, std::nullopt, opts), opts) == a);
  CHECK(json::parse(a)["verdict"] == "Universal");
}

TEST_CASE("reduce, check and bounds on the fixture verifiers") {
  cli::Options opts;
  cli::FixtureSpec eq{"equality"};
  cli::cmd_fixture(eq, scratch("eq.json"));
  cli::FixtureSpec reject{"all-reject"};
  cli::cmd_fixture(reject, scratch("reject.json"));

  CHECK_THROWS_AS(cli::cmd_reduce(scratch("eq.json"), 2, 1, scratch("eq_r2.json"), opts), ParameterError);
  const cli::Result red = cli::cmd_reduce(scratch("eq.json"), 3, 1, scratch("eq_bundle.json"), opts);
  CHECK(red.report["bundle"]["unitary_qubits"] == 10);
  CHECK(red.report["bundle"]["resource_qubits"] == 11);
  cli::cmd_reduce(scratch("reject.json"), 3, 1, scratch("reject_bundle.json"), opts);

  cli::CheckInputs yes{scratch("eq_bundle.json")};
  const cli::Result cy = cli::cmd_check(yes, std::nullopt, std::nullopt, opts);
  CHECK(cy.report["verdict"] == "NonUniversal");
  CHECK(cy.report["y"] == "11");
  cli::CheckInputs no{scratch("reject_bundle.json")};
  CHECK(cli::cmd_check(no, std::nullopt, std::nullopt, opts).report["verdict"] == "Universal");

  const cli::Result bn = cli::cmd_bounds(scratch("reject_bundle.json"), "no", opts);
  CHECK(bn.exit_code == 0);
  for (const json& row : bn.report["table"]) CHECK(row["distance"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(cli::cmd_bounds(scratch("reject_bundle.json"), "maybe", opts), UsageError);
}

TEST_CASE("pi2 argument checks run before file access") {
  cli::Options opts;
  CHECK_THROWS_AS(cli::cmd_pi2(scratch("missing.json"), std::nullopt, 0.3, 0.6, std::nullopt, std::nullopt, opts),
                  UsageError);
  CHECK_THROWS_AS(cli::cmd_pi2(scratch("missing.json"), std::nullopt, std::nullopt, std::nullopt, std::nullopt, 2, opts),
                  UsageError);
}

TEST_CASE("CSV projection") {
  cli::Result r;
  r.report = {{"table", {{{"y", "00"}, {"p", 0.5}}, {{"y", "01"}, {"q", 1}}}}};
  cli::Options opts;
  opts.format = "csv";
  CHECK(cli::render(r, opts) == "p,q,y\n0.5,,00\n,1,01\n");
  r.report = {{"verdict", "x"}};
  CHECK_THROWS_AS(cli::render(r, opts), UsageError);
}
