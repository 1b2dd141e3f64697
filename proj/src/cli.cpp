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

#include "mbqc_lab/cli.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mbqc_lab/errors.hpp"
#include "mbqc_lab/pi2.hpp"

#ifndef MBQC_LAB_VERSION
#define MBQC_LAB_VERSION "0.0.0"
#endif

namespace mbqc::cli {

namespace {

json header(const std::string& command, json parameters, const Options& opts) {
  parameters["seed"] = opts.seed;
  parameters["threads"] = opts.threads;
  parameters["max_branches"] = opts.max_branches;
  return {{"tool", "mbqc-lab"},
          {"version", version()},
          {"command", command},
          {"parameters", std::move(parameters)},
          {"tolerances",
           {{"unitary", tol::kUnitary},
            {"compare", tol::kCompare},
            {"prune", tol::kPrune},
            {"bound_margin", kBoundMargin}}}};
}

// Loads a document and converts library-level JSON type errors to ParseError.
template <class Fn>
auto load(const fs::path& path, Fn&& convert) {
  const json j = io::read_json_file(path);
  try {
    return convert(j);
  } catch (const json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  } catch (const InvariantError& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

EvalOptions eval_options(const Options& opts) {
  EvalOptions e;
  e.engine.max_branches = opts.max_branches;
  e.threads = opts.threads;
  e.seed = opts.seed;
  return e;
}

void check_witness(const BitString& y, int w) {
  if (!is_bit_string(y) || static_cast<int>(y.size()) != w) {
    throw UsageError("--y must be a bit string of length " + std::to_string(w));
  }
}

}  // namespace

std::string version() { return MBQC_LAB_VERSION; }

// ----------------------------------------------------------------------- run

Result cmd_run(const fs::path& resource, const fs::path& strategy, const BitString& y,
               const Options& opts) {
  const ResourceState res = load(resource, io::resource_from_json);
  const StrategyTable table = load(strategy, io::strategy_from_json);
  if (table.num_measured != res.num_measured() || table.num_output != res.num_output) {
    throw ParseError("strategy shape (measured " + std::to_string(table.num_measured) + ", outputs " +
                     std::to_string(table.num_output) + ") does not match the resource");
  }
  check_witness(y, table.w);
  EngineOptions eo;
  eo.max_branches = opts.max_branches;
  const OutputMixture mix = run_all_branches(res, table.to_strategy(), y, eo);

  json rows = json::array();
  for (const Branch& b : mix.branches) {
    rows.push_back({{"m", b.m}, {"p", b.probability}, {"fingerprint", io::fingerprint(b.post_state)}});
  }
  double purity = 0.0;
  for (const Branch& a : mix.branches) {
    for (const Branch& b : mix.branches) {
      purity += a.probability * b.probability * std::norm(inner(a.post_state, b.post_state));
    }
  }
  json report = header("run",
                       {{"resource", resource.string()}, {"strategy", strategy.string()}, {"y", y}},
                       opts);
  report["table"] = rows;
  report["diagnostics"] = {{"num_branches", mix.branches.size()},
                           {"total_probability", mix.total_probability()},
                           {"pruned_mass_bound", mix.pruned_mass_bound},
                           {"purity", purity},
                           {"num_output", mix.num_output}};
  return {0, report};
}

// -------------------------------------------------------------------- reduce

Result cmd_reduce(const fs::path& verifier, int r, int t, const fs::path& bundle_out,
                  const Options& opts) {
  const VerifierCircuit v = load(verifier, io::verifier_from_json);
  const ReductionBundle b = build_reduction(v, r, t);  // ParameterError -> exit 4
  io::write_json_file(bundle_out, io::to_json(b));

  json report = header("reduce",
                       {{"verifier", verifier.string()}, {"r", r}, {"t", t}, {"bundle", bundle_out.string()}},
                       opts);
  json rows = json::array();
  for (const BitString& y : all_bit_strings(v.w)) {
    rows.push_back({{"y", y}, {"p", acceptance_prob(v, y)}});
  }
  report["table"] = rows;
  report["bundle"] = {{"unitary_qubits", b.U.num_qubits},
                      {"resource_qubits", b.resource.num_qubits()},
                      {"measured_qubits", b.resource.num_measured()},
                      {"gates", b.U.gates.size()},
                      {"verifier", v.name}};
  return {0, report};
}

// --------------------------------------------------------------------- check

Result cmd_check(const CheckInputs& in, std::optional<double> epsilon, std::optional<int> t,
                 const Options& opts) {
  std::optional<ReductionBundle> bundle;
  if (in.bundle) bundle = load(*in.bundle, io::bundle_from_json);

  ResourceState res;
  UnitaryFamily fam;
  StrategyTable table;
  std::string table_ref;
  if (bundle) {
    res = bundle->resource;
    fam = bundle->family();
    table = bundle->honest_strategy;
    table_ref = in.bundle->string() + "#honest_strategy";
  } else {
    if (!in.resource || !in.family || !in.strategy) {
      throw UsageError("check needs --bundle, or --resource, --strategy and --family");
    }
    res = load(*in.resource, io::resource_from_json);
    fam = load(*in.family, io::family_from_json);
  }
  if (in.strategy) {
    table = load(*in.strategy, io::strategy_from_json);
    table_ref = in.strategy->string();
  }
  if (fam.w > 12) throw UsageError("2^w must not exceed 4096");
  if (table.num_measured != res.num_measured() || table.num_output != res.num_output ||
      table.w != fam.w || fam.n != res.num_output) {
    throw ParseError("resource, strategy and family shapes are inconsistent");
  }

  PrecisionParams prec;
  if (epsilon) {
    prec = PrecisionParams::from_epsilon(*epsilon);
  } else if (t) {
    prec = PrecisionParams::from_t(*t);
  } else if (bundle) {
    prec = PrecisionParams::from_t(bundle->params.t);
  } else {
    throw UsageError("check needs --epsilon or --t");
  }

  const Verdict v = check_universality(res, table.to_strategy(), fam, prec, eval_options(opts));
  json per_y = json::array();
  for (const YEvaluation& e : v.per_y) {
    per_y.push_back({{"y", e.y}, {"distance", e.distance}, {"fidelity", e.fidelity}});
  }
  json params = {{"epsilon", prec.epsilon}};
  if (in.bundle) params["bundle"] = in.bundle->string();
  if (in.resource) params["resource"] = in.resource->string();
  if (in.family) params["family"] = in.family->string();
  json report = header("check", params, opts);
  report["verdict"] = to_string(v.kind);
  report["epsilon"] = prec.epsilon;
  report["y"] = v.y;
  report["distance"] = v.distance;
  report["per_y"] = per_y;
  report["table"] = per_y;
  report["strategy_table_ref"] = table_ref;
  return {0, report};
}

// -------------------------------------------------------------------- bounds

Result cmd_bounds(const fs::path& bundle_path, const std::string& mode, const Options& opts) {
  if (mode != "yes" && mode != "no") throw UsageError("--mode must be 'yes' or 'no'");
  const ReductionBundle b = load(bundle_path, io::bundle_from_json);
  const ReductionParams& prm = b.params;
  const UnitaryFamily fam = b.family();
  const double yes_threshold = 1.0 - std::ldexp(1.0, -prm.r);
  const double no_threshold = std::ldexp(1.0, -prm.r);

  json rows = json::array();
  double worst = 1.0;
  if (mode == "yes") {
    OptimizerOptions oo;
    oo.seed = opts.seed;
    const SearchResult search =
        strategy_search(b.resource, fam, StrategyDictionary::standard(), PrecisionParams::from_t(prm.t), {}, oo);
    for (const YEvaluation& ev : search.best_per_y) {
      const double p = acceptance_prob(b.verifier, ev.y);
      const BoundValues bv = bound_values(p, prm.r, prm.t);
      const ProductOverlapResult prod = optimize_product_overlap(fam.target(ev.y), 32, opts.seed);
      json row = {{"y", ev.y},
                  {"p", p},
                  {"product_overlap_sq", prod.overlap_sq},
                  {"yes_branch_bound", bv.yes_branch_bound},
                  {"branch_margin", bv.yes_branch_bound - prod.overlap_sq},
                  {"fidelity", ev.fidelity},
                  {"fidelity_ceiling", std::sqrt(bv.yes_branch_bound)},
                  {"fidelity_margin", std::sqrt(bv.yes_branch_bound) - ev.fidelity},
                  {"distance", ev.distance}};
      worst = std::min({worst, bv.yes_branch_bound - prod.overlap_sq,
                        std::sqrt(bv.yes_branch_bound) - ev.fidelity});
      if (p >= yes_threshold - tol::kCompare) {
        row["promise"] = "yes";
        row["yes_fidelity_bound"] = bv.yes_fidelity_bound;
        row["distance_floor"] = bv.yes_distance_floor;
        row["margin"] = ev.distance - bv.yes_distance_floor;
        worst = std::min({worst, ev.distance - bv.yes_distance_floor,
                          bv.yes_fidelity_bound - ev.fidelity});
      } else {
        row["promise"] = "none";
      }
      rows.push_back(row);
    }
  } else {
    const Strategy honest = b.honest_strategy.to_strategy();
    for (const BitString& y : all_bit_strings(prm.w)) {
      const double p = acceptance_prob(b.verifier, y);
      const BoundValues bv = bound_values(p, prm.r, prm.t);
      const YEvaluation ev = evaluate_y(b.resource, honest, fam, y, eval_options(opts));
      const double f2 = ev.fidelity * ev.fidelity;
      const double f2_err = std::abs(f2 - bv.no_fidelity_sq_floor);
      json row = {{"y", ev.y},
                  {"p", p},
                  {"fidelity_sq", f2},
                  {"no_fidelity_sq_floor", bv.no_fidelity_sq_floor},
                  {"fidelity_sq_error", f2_err},
                  {"distance", ev.distance},
                  {"sandwich_upper", std::sqrt(1.0 - f2)}};
      worst = std::min(worst, -f2_err);
      if (p <= no_threshold + tol::kCompare) {
        row["promise"] = "no";
        row["distance_ceiling"] = bv.no_distance_ceiling;
        row["margin"] = bv.no_distance_ceiling - ev.distance;
        worst = std::min(worst, bv.no_distance_ceiling - ev.distance);
      } else {
        row["promise"] = "none";
      }
      rows.push_back(row);
    }
  }
  const BoundValues summary = bound_values(mode == "yes" ? 1.0 : 0.0, prm.r, prm.t);
  json report = header("bounds", {{"bundle", bundle_path.string()}, {"mode", mode}}, opts);
  report["table"] = rows;
  report["params"] = {{"n", prm.n}, {"w", prm.w}, {"r", prm.r}, {"t", prm.t}};
  report["analytic"] = {{"yes_distance_floor", summary.yes_distance_floor},
                        {"no_distance_ceiling", summary.no_distance_ceiling},
                        {"epsilon", summary.epsilon}};
  report["worst_margin"] = worst;
  const bool violated = worst < -kBoundMargin;
  report["status"] = violated ? "violation" : "ok";
  return {violated ? static_cast<int>(ErrorKind::BoundViolation) : 0, report};
}

// ----------------------------------------------------------------------- pi2

Result cmd_pi2(const fs::path& bundle_path, std::optional<int> lambda, std::optional<double> a,
               std::optional<double> b, std::optional<double> epsilon, std::optional<int> t,
               const Options& opts) {
  const double eps = epsilon ? *epsilon : std::ldexp(1.0, -(t ? *t : 3));
  QPi2Params params = QPi2Params::from_epsilon(eps);
  if (a) params.a = *a;
  if (b) params.b = *b;
  params.validate();  // before any file work: a <= b is a usage error
  if (lambda) params.max_lambda = *lambda;

  const ReductionBundle bundle = load(bundle_path, io::bundle_from_json);
  const UnitaryFamily fam = bundle.family();
  const StrategyEncoding enc = StrategyEncoding::standard(bundle.resource, fam.w);
  const Pi2Decision d = decide_qpi2(bundle.resource, fam, enc, params, opts.threads);

  json rows = json::array();
  for (const Pi2Row& r : d.rows) {
    rows.push_back({{"code", to_bits(r.code, d.lambda)},
                    {"max_p", r.max_p},
                    {"min_p", r.min_p},
                    {"argmax_y", r.argmax_y}});
  }
  const Strategy decisive = enc.decode(d.decisive_code).to_strategy();
  json sandwich = json::array();
  bool all_hold = true;
  for (const BitString& y : all_bit_strings(fam.w)) {
    const SandwichResult s = sandwich_check(bundle.resource, decisive, fam, y);
    all_hold = all_hold && s.holds;
    sandwich.push_back({{"y", y},
                        {"p", s.p},
                        {"d", s.d},
                        {"lower", s.lower},
                        {"upper", s.upper},
                        {"holds", s.holds}});
  }
  json report = header("pi2",
                       {{"bundle", bundle_path.string()}, {"epsilon", eps}, {"max_lambda", params.max_lambda}},
                       opts);
  report["verdict"] = to_string(d.kind);
  report["a"] = d.a;
  report["b"] = d.b;
  report["lambda"] = d.lambda;
  report["table"] = rows;
  report["decisive_code"] = to_bits(d.decisive_code, d.lambda);
  report["sandwich"] = sandwich;
  report["encoding"] = {{"bases", enc.basis_labels},
                        {"corrections", json::array({"identity", "witness_flip"})},
                        {"bits_per_y", enc.bits_per_y()}};
  if (!all_hold) throw InvariantError("trace-distance sandwich failed for the decisive strategy");
  return {0, report};
}

// ------------------------------------------------------------------- fixture

Result cmd_fixture(const FixtureSpec& spec, const fs::path& out) {
  json report = {{"tool", "mbqc-lab"}, {"version", version()}, {"command", "fixture"}};
  json files = json::array();
  if (spec.kind == "cluster") {
    fs::create_directories(out);
    const auto angles = default_cluster_angles();
    json res = {{"num_qubits", kClusterLength},
                {"num_output", 1},
                {"graph", {{"edges", json::array({{0, 1}, {1, 2}, {2, 3}, {3, 4}})}}}};
    io::write_json_file(out / "cluster_resource.json", res);
    io::write_json_file(out / "cluster_strategy.json", io::to_json(cluster_strategy_table(angles)));
    io::write_json_file(out / "cluster_family.json", io::family_to_json(cluster_family(angles)));
    for (const char* f : {"cluster_resource.json", "cluster_strategy.json", "cluster_family.json"}) {
      files.push_back((out / f).string());
    }
  } else {
    VerifierCircuit v;
    if (spec.kind == "equality") {
      v = equality_verifier(spec.s);
    } else if (spec.kind == "all-reject") {
      v = all_reject_verifier(spec.w);
    } else if (spec.kind == "rotation") {
      double theta = 0.0;
      if (spec.theta) {
        theta = *spec.theta;
      } else if (spec.p) {
        if (*spec.p < 0.0 || *spec.p > 1.0) throw UsageError("--p must lie in [0, 1]");
        theta = 2.0 * std::asin(std::sqrt(*spec.p));
      } else {
        throw UsageError("rotation fixture needs --p or --theta");
      }
      v = rotation_verifier(spec.w, theta);
    } else {
      throw UsageError("unknown fixture kind '" + spec.kind + "'");
    }
    if (spec.amplify != 1) v = amplify_verifier(v, spec.amplify);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    io::write_json_file(out, io::to_json(v));
    files.push_back(out.string());
    json rows = json::array();
    for (const BitString& y : all_bit_strings(v.w)) rows.push_back({{"y", y}, {"p", acceptance_prob(v, y)}});
    report["table"] = rows;
  }
  report["files"] = files;
  return {0, report};
}

// -------------------------------------------------------------------- output

std::string render(const Result& r, const Options& opts) {
  std::string text;
  if (opts.format == "csv") {
    if (!r.report.contains("table") || !r.report["table"].is_array()) {
      throw UsageError("this command has no table to project as CSV");
    }
    std::set<std::string> keys;
    for (const json& row : r.report["table"]) {
      for (const auto& [k, v] : row.items()) keys.insert(k);
    }
    std::ostringstream os;
    bool first = true;
    for (const std::string& k : keys) {
      os << (first ? "" : ",") << k;
      first = false;
    }
    os << "\n";
    for (const json& row : r.report["table"]) {
      first = true;
      for (const std::string& k : keys) {
        os << (first ? "" : ",");
        first = false;
        if (!row.contains(k)) continue;
        const json& v = row.at(k);
        os << (v.is_string() ? v.get<std::string>() : v.dump());
      }
      os << "\n";
    }
    text = os.str();
  } else if (opts.format == "json") {
    text = io::dump_report(r.report);
  } else {
    throw UsageError("--format must be json or csv");
  }
  if (opts.out) {
    std::ofstream f(*opts.out);
    if (!f) throw UsageError("cannot write '" + opts.out->string() + "'");
    f << text;
  }
  return text;
}

}  // namespace mbqc::cli
