// Copyright 2026 The specphase Authors.
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

// specphase: spectral two-community detection and its phase transition.
//
//   specphase generate --n1 500 --n2 500 --p1 0.25 --p2 0.25 --p 0.1 --q 0.05 --out inst
//   specphase detect   --graph inst.edges [--labels inst.labels.csv] [--out det]
//   specphase sweep    --n1 500 --n2 500 --p1 0.25 --p2 0.25 --q 0.05
//                      --p-grid 0.05:0.35:0.025 --trials 20 --out sweep.csv
//   specphase assess   --graph g.edges [--labels g.labels.csv] --q-grid 0,0.01,0.05
//                      --trials 100 --out assess.csv
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical non-convergence.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specphase/specphase.hpp"

namespace {

using namespace specphase;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitConvergence = 3;

// "start:stop:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a + 1);
    if (b == std::string::npos) throw DataError("grid '" + spec + "': expected start:stop:step");
    return make_grid(parse_double(spec.substr(0, a)), parse_double(spec.substr(a + 1, b - a - 1)),
                     parse_double(spec.substr(b + 1)));
  }
  std::vector<double> out;
  for (const auto& field : detail::split_csv(spec)) out.push_back(parse_double(field));
  if (out.empty()) throw DataError("grid '" + spec + "' is empty");
  return out;
}

std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
  std::filesystem::path p = base;
  p += suffix;
  return p;
}

// foo.csv -> foo.summary.csv
std::filesystem::path summary_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  const std::string ext = p.extension().string();
  p.replace_extension();
  p += ".summary" + (ext.empty() ? std::string(".csv") : ext);
  return p;
}

struct ModelFlags {
  std::size_t n1 = 500, n2 = 500;
  double p1 = 0.25, p2 = 0.25, q = 0.0;
  std::uint64_t seed = 1;
  std::string noise_scope = "all";

  void add(CLI::App& app) {
    app.add_option("--n1", n1, "Size of community 1")->capture_default_str();
    app.add_option("--n2", n2, "Size of community 2")->capture_default_str();
    app.add_option("--p1", p1, "Within-community probability, community 1")->capture_default_str();
    app.add_option("--p2", p2, "Within-community probability, community 2")->capture_default_str();
    app.add_option("--q", q, "Noise insertion probability")->capture_default_str();
    app.add_option("--seed", seed, "Base random seed")->capture_default_str();
    app.add_option("--noise-scope", noise_scope, "Pairs receiving noise: all|cross")
        ->check(CLI::IsMember({"all", "cross"}))
        ->capture_default_str();
  }

  GenParams params(double p) const {
    GenParams g;
    g.n1 = n1;
    g.n2 = n2;
    g.p1 = p1;
    g.p2 = p2;
    g.p = p;
    g.q = q;
    g.seed = seed;
    g.noise_scope = parse_noise_scope(noise_scope);
    return g;
  }
};

struct SolverFlags {
  double tol = 1e-8;
  std::size_t max_iter = 0;

  void add(CLI::App& app) {
    app.add_option("--tol", tol, "Eigen-residual tolerance (relative to max(1, lambda2))")
        ->capture_default_str();
    app.add_option("--max-iter", max_iter, "Lanczos iteration budget (0 = 10*sqrt(n)+200)")
        ->capture_default_str();
  }

  LanczosOptions options() const {
    LanczosOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    return o;
  }
};

int cmd_generate(const ModelFlags& model, double p, const std::string& out) {
  const GenParams params = model.params(p);
  const CommunityInstance inst = generate_sbm(params);
  const IdMap ids = IdMap::identity(params.n());
  std::vector<std::string> labels;
  labels.reserve(inst.truth.size());
  for (int t : inst.truth) labels.push_back(std::to_string(t));

  write_edge_list(inst.graph, ids, with_suffix(out, ".edges"));
  write_labels(labels, ids, with_suffix(out, ".labels.csv"));
  write_file_atomic(with_suffix(out, ".params"), format_key_values(params_manifest(params)));
  std::cout << "nodes=" << inst.graph.num_nodes() << " edges=" << inst.graph.num_edges()
            << " signal_edges=" << inst.signal_graph.num_edges() << "\n";
  return 0;
}

int cmd_detect(const std::string& graph_path, const std::string& labels_path,
               const std::string& extra_labels, const std::string& out,
               const SolverFlags& solver) {
  const EdgeListData data = read_edge_list(graph_path);
  const Detection det = detect_communities(data.graph, solver.options());

  KeyValues diag = {{"nodes", std::to_string(data.graph.num_nodes())},
                    {"edges", std::to_string(data.graph.num_edges())},
                    {"lambda2", format_double(det.spectral.lambda2)},
                    {"iterations", std::to_string(det.spectral.iterations)},
                    {"residual", format_double(det.spectral.residual)},
                    {"split_value", format_double(det.partition.split_value)},
                    {"n1_hat", std::to_string(det.partition.sizes[0])},
                    {"n2_hat", std::to_string(det.partition.sizes[1])}};
  if (!labels_path.empty()) {
    const auto truth = binarize_labels(read_labels(labels_path, data.ids),
                                       ExtraLabelPolicy::parse(extra_labels));
    diag.emplace_back("detectability", format_double(detectability(det.partition, truth)));
  }
  std::cout << format_key_values(diag);

  if (!out.empty()) {
    std::vector<std::string> sides;
    for (int a : det.partition.assignment) sides.push_back(std::to_string(a));
    std::string csv = "id,side\n";
    for (NodeId i = 0; i < sides.size(); ++i) csv += data.ids.name(i) + "," + sides[i] + "\n";
    write_file_atomic(with_suffix(out, ".partition.csv"), csv);
    write_file_atomic(with_suffix(out, ".spectral"), format_key_values(diag));
  }
  return 0;
}

int cmd_sweep(const ModelFlags& model, const std::string& p_grid, std::size_t trials,
              std::size_t threads, const std::string& out, const SolverFlags& solver) {
  SweepConfig cfg;
  cfg.base = model.params(0.0);
  cfg.p_grid = parse_grid(p_grid);
  cfg.trials = trials;
  cfg.threads = resolve_threads(threads);
  cfg.solver = solver.options();
  const auto rows = run_sweep(cfg);
  const auto summary = summarize_sweep(rows);
  const std::string summary_text = format_summary(sweep_summary_table(summary));
  if (out.empty() || out == "-") {
    std::cout << format_rows<SweepRow>(rows) << "\n" << summary_text;
  } else {
    write_sweep_csv(rows, out);
    write_file_atomic(summary_path(out), summary_text);
  }
  return 0;
}

int cmd_assess(const std::string& graph_path, const std::string& labels_path,
               const std::string& extra_labels, const std::string& q_grid, std::size_t trials,
               std::uint64_t seed, std::size_t threads, const std::string& out,
               const SolverFlags& solver) {
  const EdgeListData data = read_edge_list(graph_path);
  std::optional<std::vector<int>> truth;
  if (!labels_path.empty()) {
    truth = binarize_labels(read_labels(labels_path, data.ids),
                            ExtraLabelPolicy::parse(extra_labels));
  }
  AssessConfig cfg;
  cfg.q_grid = parse_grid(q_grid);
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.threads = resolve_threads(threads);
  cfg.solver = solver.options();
  const auto rows = run_assess(data.graph, truth ? &*truth : nullptr, cfg);
  const std::string summary_text = format_summary(assess_summary_table(summarize_assess(rows)));
  if (out.empty() || out == "-") {
    std::cout << format_rows<AssessRow>(rows) << "\n" << summary_text;
  } else {
    write_assess_csv(rows, out);
    write_file_atomic(summary_path(out), summary_text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral two-community detection and detectability phase transitions"};
  app.require_subcommand(1);

  ModelFlags model;
  SolverFlags solver;

  auto* gen = app.add_subcommand("generate", "Sample a two-community instance");
  double gen_p = 0.1;
  std::string gen_out;
  model.add(*gen);
  gen->add_option("--p", gen_p, "Inter-community probability")->capture_default_str();
  gen->add_option("--out", gen_out, "Output prefix (.edges, .labels.csv, .params)")->required();

  auto* det = app.add_subcommand("detect", "Spectral bisection of an edge-list graph");
  std::string det_graph, det_labels, det_out, det_extra = "ignore";
  det->add_option("--graph", det_graph, "Edge-list file")->required();
  det->add_option("--labels", det_labels, "Ground-truth labels (id,label CSV)");
  det->add_option("--extra-labels", det_extra, "Labels beyond two classes: ignore|merge:<label>")
      ->capture_default_str();
  det->add_option("--out", det_out, "Output prefix (.partition.csv, .spectral)");
  solver.add(*det);

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over the inter-community probability");
  std::string sweep_grid = "0.05:0.35:0.025", sweep_out;
  std::size_t sweep_trials = 20, sweep_threads = 0;
  model.add(*sweep);
  sweep->add_option("--p-grid", sweep_grid, "start:stop:step or comma list")->capture_default_str();
  sweep->add_option("--trials", sweep_trials, "Trials per grid point")->capture_default_str();
  sweep->add_option("--threads", sweep_threads, "Worker threads (0 = $SPECPHASE_THREADS or 1)");
  sweep->add_option("--out", sweep_out, "Per-trial CSV path; summary goes next to it");
  solver.add(*sweep);

  auto* assess_cmd = app.add_subcommand("assess", "Noise sensitivity and reliability regimes");
  std::string as_graph, as_labels, as_extra = "ignore", as_grid = "0", as_out;
  std::size_t as_trials = 1, as_threads = 0;
  std::uint64_t as_seed = 1;
  assess_cmd->add_option("--graph", as_graph, "Edge-list file")->required();
  assess_cmd->add_option("--labels", as_labels, "Ground-truth labels (id,label CSV)");
  assess_cmd->add_option("--extra-labels", as_extra, "Labels beyond two classes: ignore|merge:<label>")
      ->capture_default_str();
  assess_cmd->add_option("--q-grid", as_grid, "start:stop:step or comma list")->capture_default_str();
  assess_cmd->add_option("--trials", as_trials, "Trials per noise level")->capture_default_str();
  assess_cmd->add_option("--seed", as_seed, "Base random seed")->capture_default_str();
  assess_cmd->add_option("--threads", as_threads, "Worker threads (0 = $SPECPHASE_THREADS or 1)");
  assess_cmd->add_option("--out", as_out, "Per-trial CSV path; summary goes next to it");
  solver.add(*assess_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(model, gen_p, gen_out);
    if (*det) return cmd_detect(det_graph, det_labels, det_extra, det_out, solver);
    if (*sweep) return cmd_sweep(model, sweep_grid, sweep_trials, sweep_threads, sweep_out, solver);
    if (*assess_cmd) {
      return cmd_assess(as_graph, as_labels, as_extra, as_grid, as_trials, as_seed, as_threads,
                        as_out, solver);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
