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

// Subcommand implementations behind tools/mbqc_lab.cpp. Each returns the
// report document and an exit code; mbqc::Error exceptions carry the exit
// code for failures (1 usage, 2 parse, 3 invariant, 4 parameter constraint,
// 5 bound violation, 6 cap).

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mbqc_lab/io.hpp"

namespace mbqc::cli {

using io::json;
namespace fs = std::filesystem;

inline constexpr double kBoundMargin = 1e-6;

struct Options {
  std::uint64_t seed = 0;
  std::optional<fs::path> out;
  std::string format = "json";  // json | csv
  int threads = 1;
  std::size_t max_branches = std::size_t{1} << 20;
};

struct Result {
  int exit_code = 0;
  json report;
};

std::string version();

/// Branch table of one protocol run.
Result cmd_run(const fs::path& resource, const fs::path& strategy, const BitString& y,
               const Options& opts);

/// Writes the reduction bundle to `bundle_out`; the report summarizes it.
Result cmd_reduce(const fs::path& verifier, int r, int t, const fs::path& bundle_out,
                  const Options& opts);

struct CheckInputs {
  std::optional<fs::path> bundle;
  std::optional<fs::path> resource;
  std::optional<fs::path> strategy;  // overrides the bundle's honest strategy
  std::optional<fs::path> family;
};

/// Universality certificate. epsilon wins over t; with neither, a bundle's t
/// is used.
Result cmd_check(const CheckInputs& in, std::optional<double> epsilon, std::optional<int> t,
                 const Options& opts);

/// Per-witness measured quantities against the analytic bounds. Exit 5 when a
/// margin is negative beyond 1e-6.
Result cmd_bounds(const fs::path& bundle, const std::string& mode, const Options& opts);

/// Two-quantifier decision under the standard strategy encoding. Thresholds
/// default to a = 1 - 2 eps, b = 2 eps with eps = 2^-t (t defaults to 3).
Result cmd_pi2(const fs::path& bundle, std::optional<int> lambda, std::optional<double> a,
               std::optional<double> b, std::optional<double> epsilon, std::optional<int> t,
               const Options& opts);

struct FixtureSpec {
  std::string kind;  // cluster | equality | all-reject | rotation
  std::string s = "11";
  int w = 2;
  std::optional<double> p;      // rotation acceptance probability
  std::optional<double> theta;  // rotation angle (alternative to p)
  int amplify = 1;
};

/// Writes fixture files: the cluster kind writes cluster_resource.json,
/// cluster_strategy.json and cluster_family.json into `out` (a directory);
/// verifier kinds write a single verifier file to `out`.
Result cmd_fixture(const FixtureSpec& spec, const fs::path& out);

/// Writes report (or its "table" as CSV) to opts.out, or returns the text.
std::string render(const Result& r, const Options& opts);

}  // namespace mbqc::cli
