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

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "mbqc_lab/cli.hpp"
#include "mbqc_lab/errors.hpp"

namespace {

using mbqc::cli::fs::path;

template <class T>
std::optional<T> opt_if(const CLI::Option* o, const T& v) {
  return o->count() ? std::optional<T>(v) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-based quantum computation lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mbqc::cli::version());

  mbqc::cli::Options opts;
  std::string out;
  if (const char* env = std::getenv("MBQC_LAB_THREADS")) {
    try {
      opts.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "error: MBQC_LAB_THREADS is not an integer\n";
      return 1;
    }
  }
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", opts.seed, "RNG seed");
    sub->add_option("--out", out, "Write the report to this file");
    sub->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-branches", opts.max_branches, "Branch enumeration cap");
  };

  std::string resource, strategy, verifier, bundle, family, y, mode = "yes", kind, s = "11";
  double epsilon = 0.0, a = 0.0, b = 0.0, p = 0.0, theta = 0.0;
  int r = 0, t = 0, lambda = 16, w = 2, amplify = 1;

  auto* run = app.add_subcommand("run", "Enumerate all outcome branches of one protocol run");
  run->add_option("--resource", resource)->required();
  run->add_option("--strategy", strategy)->required();
  run->add_option("--y", y)->required();
  common(run);

  auto* reduce = app.add_subcommand("reduce", "Build the reduction bundle for a verifier");
  reduce->add_option("--verifier", verifier)->required();
  reduce->add_option("--r", r)->required();
  reduce->add_option("--t", t)->required();
  reduce->add_option("--bundle", bundle, "Bundle output path")->required();
  common(reduce);

  auto* check = app.add_subcommand("check", "Universality certificate");
  auto* c_bundle = check->add_option("--bundle", bundle);
  auto* c_res = check->add_option("--resource", resource);
  auto* c_strat = check->add_option("--strategy", strategy);
  auto* c_fam = check->add_option("--family", family);
  auto* c_eps = check->add_option("--epsilon", epsilon);
  auto* c_t = check->add_option("--t", t);
  common(check);

  auto* bounds = app.add_subcommand("bounds", "Compare measured quantities with analytic bounds");
  bounds->add_option("--bundle", bundle)->required();
  bounds->add_option("--mode", mode)->check(CLI::IsMember({"yes", "no"}));
  common(bounds);

  auto* pi2 = app.add_subcommand("pi2", "Two-quantifier decision over encoded strategies");
  pi2->add_option("--bundle", bundle)->required();
  auto* p_lambda = pi2->add_option("--lambda", lambda, "Cap on the strategy encoding length");
  auto* p_a = pi2->add_option("--a", a);
  auto* p_b = pi2->add_option("--b", b);
  auto* p_eps = pi2->add_option("--epsilon", epsilon);
  auto* p_t = pi2->add_option("--t", t);
  common(pi2);

  auto* fixture = app.add_subcommand("fixture", "Write fixture inputs");
  fixture->add_option("kind", kind)->required()->check(
      CLI::IsMember({"cluster", "equality", "all-reject", "rotation"}));
  fixture->add_option("--s", s, "EQUALITY reference string");
  fixture->add_option("--w", w, "Witness length");
  auto* f_p = fixture->add_option("--p", p, "ROTATION acceptance probability");
  auto* f_theta = fixture->add_option("--theta", theta, "ROTATION angle");
  fixture->add_option("--amplify", amplify, "Odd number of parallel repetitions");
  std::string fixture_out;
  fixture->add_option("--path", fixture_out, "Output file, or directory for cluster")->required();
  fixture->add_option("--out", out, "Write the report to this file");
  fixture->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!out.empty()) opts.out = path(out);

  try {
    mbqc::cli::Result res;
    if (*run) {
      res = mbqc::cli::cmd_run(resource, strategy, y, opts);
    } else if (*reduce) {
      res = mbqc::cli::cmd_reduce(verifier, r, t, bundle, opts);
    } else if (*check) {
      mbqc::cli::CheckInputs in;
      in.bundle = opt_if(c_bundle, path(bundle));
      in.resource = opt_if(c_res, path(resource));
      in.strategy = opt_if(c_strat, path(strategy));
      in.family = opt_if(c_fam, path(family));
      res = mbqc::cli::cmd_check(in, opt_if(c_eps, epsilon), opt_if(c_t, t), opts);
    } else if (*bounds) {
      res = mbqc::cli::cmd_bounds(bundle, mode, opts);
    } else if (*pi2) {
      res = mbqc::cli::cmd_pi2(bundle, opt_if(p_lambda, lambda), opt_if(p_a, a), opt_if(p_b, b),
                               opt_if(p_eps, epsilon), opt_if(p_t, t), opts);
    } else {
      mbqc::cli::FixtureSpec spec;
      spec.kind = kind;
      spec.s = s;
      spec.w = w;
      spec.p = opt_if(f_p, p);
      spec.theta = opt_if(f_theta, theta);
      spec.amplify = amplify;
      res = mbqc::cli::cmd_fixture(spec, fixture_out);
    }
    const std::string text = mbqc::cli::render(res, opts);
    if (!opts.out) std::cout << text;
    return res.exit_code;
  } catch (const mbqc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
