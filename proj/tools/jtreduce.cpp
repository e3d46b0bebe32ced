/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#include <fstream>
#include <limits>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "jtr/compile.hpp"
#include "jtr/ind_graph.hpp"
#include "jtr/model_io.hpp"
#include "jtr/reduce.hpp"
#include "jtr/report.hpp"
#include "jtr/sampling.hpp"

namespace {

using namespace jtr;

std::string stem_of(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

void print_compile_summary(const NetworkModel& m, const CompileResult& r) {
  std::cout << "network: " << m.name << "\n";
  std::cout << "variables: " << m.variables.size() << "\n";
  std::cout << "components: " << m.graph.chain_components().size() << "\n";
  std::cout << "parameters: " << parameter_count(m) << "\n";
  std::cout << "fill-ins: " << r.fills.size() << "\n";
  std::cout << "cliques: " << r.tree.clique_count() << "\n";
  const auto [cl, se] = r.tree.total_size();
  std::cout << "clique mass: " << cl << "\n";
  std::cout << "separator mass: " << se << "\n";
  std::cout << "total size: " << (cl + se) << "\n";
}

int cmd_compile(const std::string& path) {
  const NetworkModel m = parse_network_file(path);
  const CompileResult r = compile_model(m);
  print_compile_summary(m, r);
  return 0;
}

int cmd_check(const std::string& path) {
  const NetworkModel m = parse_network_file(path);
  std::cout << "network: " << m.name << "\n";
  std::cout << "chain graph: valid (" << m.graph.node_count() << " nodes, "
            << m.graph.link_count() << " links, " << m.graph.chain_components().size()
            << " chain components)\n";
  if (!m.graph.is_connected())
    std::cout << "warning: graph is disconnected; reductions treat components independently\n";
  const CompileResult r = compile_structure(m);
  std::cout << "fill-ins: " << r.fills.size() << "\n";
  std::map<std::size_t, int> histogram;
  for (const auto& c : r.tree.cliques()) ++histogram[c.vars.size()];
  std::cout << "clique sizes:";
  for (auto [size, count] : histogram) std::cout << " " << size << "x" << count;
  std::cout << "\n";
  const auto [cl, se] = r.tree.total_size();
  std::cout << "total size: " << (cl + se) << " (cliques " << cl << " + separators " << se
            << ")\n";
  std::cout << "parameters: " << parameter_count(m) << "\n";
  return 0;
}

int cmd_query(const std::string& path, const std::vector<std::string>& var_names) {
  const NetworkModel m = parse_network_file(path);
  CompileResult r = compile_model(m);
  NodeSet vars;
  for (const std::string& name : var_names) {
    const VarId v = m.variables.find(name);
    if (v < 0) throw ParseError("unknown variable '" + name + "'");
    vars.push_back(v);
  }
  const Potential marg = r.tree.query(vars);
  std::cout << "# marginal over";
  for (VarId v : marg.domain()) std::cout << " " << m.variables[v].name;
  std::cout << "\n";
  std::vector<int> digits(marg.domain().size(), 0);
  for (std::size_t i = 0; i < marg.size(); ++i) {
    for (std::size_t k = 0; k < digits.size(); ++k) {
      const VarId v = marg.domain()[k];
      std::cout << m.variables[v].states[static_cast<std::size_t>(digits[k])] << '\t';
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", marg[i]);
    std::cout << buf << "\n";
    for (std::size_t k = digits.size(); k-- > 0;) {
      if (++digits[k] < marg.cards()[k]) break;
      digits[k] = 0;
    }
  }
  return 0;
}

int cmd_sample(const std::string& path, std::size_t n, std::uint64_t seed,
               const std::string& out) {
  const NetworkModel m = parse_network_file(path);
  const SampleSet s = forward_sample(m, n, seed);
  if (out.empty()) {
    write_samples(std::cout, s, m.variables);
  } else {
    std::ostringstream os;
    write_samples(os, s, m.variables);
    write_file_atomic(out, os.str());
    std::cout << "wrote " << s.count() << " records to " << out << "\n";
  }
  return 0;
}

int cmd_reduce(const std::string& path, double budget, const std::string& mode,
               std::size_t samples, std::uint64_t seed, std::string out_prefix) {
  const NetworkModel m = parse_network_file(path);
  if (out_prefix.empty()) out_prefix = stem_of(path) + ".reduced";

  CompileResult compiled = compile_structure(m);
  if (mode == "exact") {
    try {
      initialize(compiled.tree, m);
      compiled.tree.propagate();
    } catch (const ComponentTooLargeError& e) {
      throw ComponentTooLargeError(std::string(e.what()) +
                                   " (exact compile infeasible; try --mode sampled)");
    }
  } else {
    const SampleSet s = forward_sample(m, samples, seed);
    estimate_clique_potentials(s, compiled.tree);
  }

  ReduceResult result = greedy_reduce(compiled.tree, m.graph, m.variables, budget, mode);

  // Recover component potentials for the updated graph and emit the
  // reduced network; the reported size is the emitted network's compiled
  // size, not the surgery tree's.
  const JunctionTree& tree = compiled.tree;
  const MarginalFn psi = [&tree](const NodeSet& s) { return tree.marginal_by_elimination(s); };
  // sampled potentials carry estimation noise, so the recovered joint is
  // checked only in exact mode
  const double tol = mode == "exact" ? 1e-9 : std::numeric_limits<double>::infinity();
  const RecursiveModel rec = derive_recursive_model(result.graph, m.variables, psi, tol);

  NetworkModel reduced;
  reduced.name = m.name + "-reduced";
  reduced.description = m.description;
  reduced.variables = m.variables;
  reduced.graph = result.graph;
  reduced.potentials = rec.model.potentials;
  validate_model(reduced);

  const CompileResult recompiled = compile_structure(reduced);
  const auto [cl, se] = recompiled.tree.total_size();
  result.report.size_after = cl + se;

  write_network_file(out_prefix + ".net", reduced);
  std::ostringstream report_os;
  write_report(report_os, m.name, result.report, m.variables);
  write_file_atomic(out_prefix + ".report.tsv", report_os.str());

  std::cout << "removed " << result.report.removals.size() << " links, total divergence "
            << result.report.total_divergence << ", error bound " << result.report.bound << "\n";
  std::cout << "size " << result.report.size_before << " -> " << result.report.size_after << "\n";
  std::cout << "parameters " << parameter_count(m) << " -> " << parameter_count(reduced) << "\n";
  if (rec.suboptimal)
    std::cout << "note: a component needed fill-ins; the recovered model is suboptimal\n";
  std::cout << "wrote " << out_prefix << ".net and " << out_prefix << ".report.tsv\n";
  return 0;
}

int cmd_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  const ReportCheck check = check_report(in);
  std::cout << check.text;
  if (!check.ok) {
    std::cerr << "report check failed\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"junction-tree compiler and weak-dependence reducer"};
  app.require_subcommand(1);

  std::string model_path, out, report_path;
  std::vector<std::string> query_vars;
  double budget = 0.001;
  std::string mode = "exact";
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;

  auto* compile = app.add_subcommand("compile", "compile and summarize a network");
  compile->add_option("model", model_path)->required();

  auto* reduce = app.add_subcommand("reduce", "remove weak dependences under a divergence budget");
  reduce->add_option("model", model_path)->required();
  reduce->add_option("--budget", budget, "total KL divergence allowance")->check(CLI::NonNegativeNumber);
  reduce->add_option("--mode", mode)->check(CLI::IsMember({"exact", "sampled"}));
  reduce->add_option("--samples", n_samples, "forward-sampling size for --mode sampled");
  reduce->add_option("--seed", seed);
  reduce->add_option("--out", out, "output prefix (default: <model>.reduced)");

  auto* query = app.add_subcommand("query", "marginal over variables sharing a clique");
  query->add_option("model", model_path)->required();
  query->add_option("--vars", query_vars, "variable names")->required()->delimiter(',');

  auto* sample = app.add_subcommand("sample", "forward-sample the prior");
  sample->add_option("model", model_path)->required();
  sample->add_option("--n", n_samples)->required();
  sample->add_option("--seed", seed);
  sample->add_option("--out", out);

  auto* check = app.add_subcommand("check", "structural diagnostics");
  check->add_option("model", model_path)->required();

  auto* report = app.add_subcommand("report", "validate a reduction report");
  report->add_option("file", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    if (app.got_subcommand(compile)) return cmd_compile(model_path);
    if (app.got_subcommand(reduce)) return cmd_reduce(model_path, budget, mode, n_samples, seed, out);
    if (app.got_subcommand(query)) return cmd_query(model_path, query_vars);
    if (app.got_subcommand(sample)) return cmd_sample(model_path, n_samples, seed, out);
    if (app.got_subcommand(check)) return cmd_check(model_path);
    if (app.got_subcommand(report)) return cmd_report(report_path);
  } catch (const jtr::ComponentTooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const jtr::TableTooLargeError& e) {
    std::cerr << "error: " << e.what() << " (compile infeasible at this scale)\n";
    return 3;
  } catch (const jtr::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const jtr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
