/* Copyright 2026 The qchannel Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end. Lives in a header so tests can drive it in
// process; tools/main.cpp only forwards argv.
//
// Exit codes: 0 success, 1 usage / IO / library error, 2 solver did not
// converge (the report is still written).

#ifndef QCHANNEL_TOOLS_CLI_HPP_
#define QCHANNEL_TOOLS_CLI_HPP_

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qchannel/experiments.hpp"
#include "qchannel/serialize.hpp"

namespace qchannel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

struct Options {
  int n = 10;
  int d = 10;
  int ns = 1;
  int nr = 1;
  int m = 200;
  std::uint64_t seed = 1;
  std::string proxy = "sqrt";
  int levels = 3;
  int max_iter = 200;
  double tol = 1e-9;
  int restarts = 4;
  std::string out;
  std::string weights;
  std::string dataset;
  std::string solution;
  std::string truth_out;
  double t_start = 0.0;
  double t_end = 10.0;
  double t_step = 0.1;
  double hbar = 1.0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void emit(const std::string& path, const std::string& text,
                 std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

inline SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.max_iterations = o.max_iter;
  cfg.convergence_rel_tol = o.tol;
  cfg.seed = o.seed;
  return cfg;
}

inline MappingDataset load_dataset(const Options& o, const CLI::App& sub) {
  if (o.dataset.empty()) throw UsageError("--dataset is required");
  MappingDataset ds = dataset_from_json(read_json_file(o.dataset));
  if ((sub.count("--n") && o.n != ds.n()) ||
      (sub.count("--d") && o.d != ds.d())) {
    throw UsageError("dataset is " + std::to_string(ds.d()) + "x" +
                     std::to_string(ds.n()) + " but flags ask for " +
                     std::to_string(o.d) + "x" + std::to_string(o.n));
  }
  if (!o.weights.empty()) {
    const Json w = read_json_file(o.weights);
    if (!w.is_array() || w.size() != ds.size()) {
      throw UsageError("--weights must be a JSON array with one entry per record");
    }
    MappingDataset re(ds.n(), ds.d());
    for (std::size_t l = 0; l < ds.size(); ++l) {
      re.add({ds[l].rho, ds[l].varrho, w[l].get<double>()});
    }
    ds = std::move(re);
  }
  return ds;
}

inline Closeness quadratic_proxy(const std::string& name) {
  Closeness c;
  try {
    c = parse_closeness(name);
  } catch (const Error&) {
    throw UsageError("unknown proxy '" + name + "'");
  }
  if (c == Closeness::kProp || c == Closeness::kPropOverlap ||
      c == Closeness::kCorr) {
    throw UsageError("proxy '" + name +
                     "' is not quadratic in the operator and cannot be solved");
  }
  return c;
}

inline Json learn_report(const MappingDataset& ds, Closeness proxy,
                         const Superoperator& s, const Solution& sol) {
  Json j;
  j["proxy"] = std::string(closeness_name(proxy));
  j["superop_kind"] = kind_name(s.kind());
  j["counts_observations"] = s.kind().counts_observations();
  j["m"] = ds.size();
  j["fidelity"] = sol.fidelity;
  j["fidelity_per_observation"] =
      ds.empty() ? 0.0 : sol.fidelity / ds.total_weight();
  j["trace_lambda"] = sol.multipliers.trace();
  j["mu_selected"] = sol.mu_selected;
  j["residual"] = sol.residual;
  j["constraint_violation"] = sol.constraint_violation;
  j["orthonormality_violation"] = orthonormality_violation(sol.b);
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["F_prop_overlap"] =
      total_fidelity_dataset(Closeness::kPropOverlap, ds, sol.b);
  j["F_prop"] = total_fidelity_dataset(Closeness::kProp, ds, sol.b);
  j["solution"] = solution_to_json(sol);
  return j;
}

inline int cmd_gen(const Options& o, std::ostream& out) {
  if (o.m < 1) throw UsageError("--m must be >= 1");
  if (o.n < 1 || o.d < 1 || o.d > o.n) throw UsageError("need 1 <= d <= n");
  if (o.nr < 1 || o.nr > o.n) throw UsageError("need 1 <= nr <= n");
  if (o.ns < 1) throw UsageError("--ns must be >= 1");
  Rng rng(o.seed);
  const MappingOperator channel = random_channel(o.d, o.n, o.ns, rng);
  const MappingDataset ds = map_dataset(channel, o.nr, o.m, rng);
  emit(o.out, dataset_to_json(ds).dump(1) + "\n", out);
  if (!o.truth_out.empty()) {
    write_json_file(o.truth_out, operator_to_json(channel));
  }
  return kExitOk;
}

inline int cmd_learn(const Options& o, const CLI::App& sub, std::ostream& out) {
  const Closeness proxy = quadratic_proxy(o.proxy);
  const MappingDataset ds = load_dataset(o, sub);
  const Superoperator s = build_superop(ds, kind_for_proxy(proxy));
  SolverConfig cfg = solver_config(o);
  cfg.seed = derive_seed(o.seed, 0);  // level 0 of a hierarchy
  const Solution sol = solve_multistart(s, cfg, ConstraintSet(), o.restarts);
  emit(o.out, learn_report(ds, proxy, s, sol).dump(1) + "\n", out);
  return sol.converged ? kExitOk : kExitNotConverged;
}

inline int cmd_hier(const Options& o, const CLI::App& sub, std::ostream& out,
                    std::ostream& err) {
  const Closeness proxy = quadratic_proxy(o.proxy);
  const MappingDataset ds = load_dataset(o, sub);
  auto s = std::make_shared<const Superoperator>(
      build_superop(ds, kind_for_proxy(proxy)));
  HierarchyOptions opts;
  opts.restarts = o.restarts;
  const Hierarchy h = build_hierarchy(s, o.levels, solver_config(o), opts);
  for (const auto& w : h.warnings) err << "warning: " << w << "\n";
  Json j = hierarchy_to_json(h);
  j["proxy"] = std::string(closeness_name(proxy));
  j["superop_kind"] = kind_name(s->kind());
  Json per_level = Json::array();
  for (const auto& lvl : h.levels) {
    per_level.push_back(
        {{"F_prop_overlap",
          total_fidelity_dataset(Closeness::kPropOverlap, ds, lvl.u)},
         {"F_prop", total_fidelity_dataset(Closeness::kProp, ds, lvl.u)}});
  }
  j["proper_fidelity"] = std::move(per_level);
  emit(o.out, j.dump(1) + "\n", out);
  if (!h.complete) {
    err << "warning: " << h.failure << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

inline int cmd_fig1(const Options& o, std::ostream& out) {
  if (o.m < 1) throw UsageError("--m must be >= 1");
  if (o.d > o.n) throw UsageError("need d <= n");
  const auto rows = fig1_sweep(o.n, o.d, o.ns, o.m, o.seed);
  std::ostringstream csv;
  csv << "N_r,proxy,F_total_on_exact_channel\n";
  for (const auto& r : rows) {
    csv << r.n_r << "," << closeness_name(r.proxy) << "," << fmt17(r.fidelity)
        << "\n";
  }
  emit(o.out, csv.str(), out);
  return kExitOk;
}

inline int cmd_table1(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.m < 1) throw UsageError("--m must be >= 1");
  if (o.d > o.n) throw UsageError("need d <= n");
  HierarchyOptions opts;
  opts.restarts = o.restarts;
  const Table1Result res = table1_experiment(o.n, o.d, o.ns, o.m, o.levels,
                                             o.seed, solver_config(o), opts);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";
  std::ostringstream csv;
  csv << "proxy,F_exact,level,F_level,F_prop_level,F_prop_uhlmann_level\n";
  for (const auto& r : res.rows) {
    csv << closeness_name(r.proxy) << "," << fmt17(r.f_exact) << "," << r.level
        << "," << fmt17(r.f_level) << "," << fmt17(r.f_prop_level) << ","
        << fmt17(r.f_prop_uhlmann_level) << "\n";
  }
  emit(o.out, csv.str(), out);
  return kExitOk;
}

inline int cmd_evolve(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.solution.empty()) throw UsageError("--solution is required");
  if (!(o.t_step > 0.0) || o.t_end < o.t_start) {
    throw UsageError("need t-step > 0 and t-end >= t-start");
  }
  Json doc = read_json_file(o.solution);
  if (doc.contains("solution")) doc = doc.at("solution");
  const Solution sol = solution_from_json(doc);
  const GroundStateEvolution g = prepare_evolution(sol, o.hbar);
  std::ostringstream csv;
  csv << "t,row,col,re,im,abs,phase\n";
  double worst = 0.0;
  const auto steps =
      static_cast<long>(std::floor((o.t_end - o.t_start) / o.t_step + 1e-9));
  for (long i = 0; i <= steps; ++i) {
    const double t = o.t_start + static_cast<double>(i) * o.t_step;
    const ComplexOperator v = evolve(g, t);
    worst = std::max(worst, v.unitarity_violation());
    const ComplexOperator u = to_original_basis(g, v);
    for (Eigen::Index p = 0; p < u.re.rows(); ++p)
      for (Eigen::Index k = 0; k < u.re.cols(); ++k) {
        const double re = u.re(p, k);
        const double im = u.im(p, k);
        csv << fmt17(t) << "," << p << "," << k << "," << fmt17(re) << ","
            << fmt17(im) << "," << fmt17(std::hypot(re, im)) << ","
            << fmt17(std::atan2(im, re)) << "\n";
      }
  }
  emit(o.out, csv.str(), out);
  err << "max_unitarity_violation " << fmt17(worst) << "\n";
  return kExitOk;
}

/// Parses argv and runs one subcommand. Never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Learn quantum channel mappings from density-matrix pairs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--n", o.n, "input dimension");
    sub->add_option("--d", o.d, "output dimension");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output path (stdout when omitted)");
  };
  auto solver = [&o](CLI::App* sub) {
    sub->add_option("--proxy", o.proxy,
                    "rho_sigma | sqrt | vec | nrho2 | log");
    sub->add_option("--max-iter", o.max_iter, "solver iteration limit");
    sub->add_option("--tol", o.tol, "relative fidelity change tolerance");
    sub->add_option("--restarts", o.restarts, "extra random starts");
    sub->add_option("--dataset", o.dataset, "dataset JSON");
    sub->add_option("--weights", o.weights, "JSON array of record weights");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  common(gen);
  gen->add_option("--ns", o.ns, "Kraus rank of the generating channel");
  gen->add_option("--nr", o.nr, "rank of the input states");
  gen->add_option("--m", o.m, "number of observations");
  gen->add_option("--truth-out", o.truth_out, "write the generating channel");

  CLI::App* learn = app.add_subcommand("learn", "learn a partial unitary");
  common(learn);
  solver(learn);

  CLI::App* hier = app.add_subcommand("hier", "build a unitary hierarchy");
  common(hier);
  solver(hier);
  hier->add_option("--levels", o.levels, "number of levels");

  CLI::App* fig1 = app.add_subcommand("fig1", "proxy fidelities vs input rank");
  common(fig1);
  fig1->add_option("--ns", o.ns, "Kraus rank of the channel");
  fig1->add_option("--m", o.m, "observations per input rank");

  CLI::App* table1 = app.add_subcommand("table1", "hierarchies per proxy");
  common(table1);
  table1->add_option("--ns", o.ns, "number of unitaries in the channel");
  table1->add_option("--m", o.m, "number of observations");
  table1->add_option("--levels", o.levels, "hierarchy depth");
  table1->add_option("--max-iter", o.max_iter, "solver iteration limit");
  table1->add_option("--tol", o.tol, "relative fidelity change tolerance");
  table1->add_option("--restarts", o.restarts, "extra random starts");

  CLI::App* evolve_cmd = app.add_subcommand("evolve", "evolve a solution");
  evolve_cmd->add_option("--solution", o.solution, "learn report or solution");
  evolve_cmd->add_option("--t-start", o.t_start, "first time");
  evolve_cmd->add_option("--t-end", o.t_end, "last time");
  evolve_cmd->add_option("--t-step", o.t_step, "time step");
  evolve_cmd->add_option("--hbar", o.hbar, "Planck constant in model units");
  evolve_cmd->add_option("--out", o.out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(o, out);
    if (*learn) return cmd_learn(o, *learn, out);
    if (*hier) return cmd_hier(o, *hier, out, err);
    if (*fig1) return cmd_fig1(o, out);
    if (*table1) return cmd_table1(o, out, err);
    if (*evolve_cmd) return cmd_evolve(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kNotConverged ? kExitNotConverged : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qchannel::cli

#endif  // QCHANNEL_TOOLS_CLI_HPP_
