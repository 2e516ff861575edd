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

// Monte Carlo drivers behind the `sweep` and `assess` subcommands.
//
// Trials run in parallel but each trial is a pure function of its derived
// seed, and rows are collected by index, so output does not depend on the
// thread count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "specphase/assess.hpp"
#include "specphase/error.hpp"
#include "specphase/gen.hpp"
#include "specphase/io.hpp"
#include "specphase/partition.hpp"
#include "specphase/spectral.hpp"
#include "specphase/theory.hpp"

namespace specphase {

/// Runs body(i) for i in [0, count) on up to `threads` workers.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Explicit value, else SPECPHASE_THREADS, else 1.
inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPECPHASE_THREADS")) {
    try {
      const auto v = parse_u64(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const DataError&) {
    }
  }
  return 1;
}

/// start, start+step, ..., up to stop inclusive (with a small tolerance).
inline std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw DataError("grid step must be positive");
  if (stop < start) throw DataError("grid stop is below start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = start + static_cast<double>(k) * step;
  return grid;
}

/// Seed path component for a grid value. Keyed on the value rather than its
/// position so refining a grid leaves existing points' trials unchanged.
inline std::uint64_t grid_key(double value) {
  return static_cast<std::uint64_t>(std::llround(value * 1e12));
}

/// lambda2 of each ground-truth community's induced subgraph of the observed
/// graph, i.e. the realized spectra of L_i = L_S_i + L_N_i.
inline CommunitySpectra realized_spectra(const CommunityInstance& inst,
                                         const LanczosOptions& opts = {}) {
  std::vector<NodeId> first(inst.params.n1), second(inst.params.n2);
  for (std::size_t i = 0; i < first.size(); ++i) first[i] = static_cast<NodeId>(i);
  for (std::size_t i = 0; i < second.size(); ++i) {
    second[i] = static_cast<NodeId>(inst.params.n1 + i);
  }
  CommunitySpectra s;
  s.lambda2_1 = fiedler(induced_subgraph(inst.graph, first), opts).lambda2;
  s.lambda2_2 = fiedler(induced_subgraph(inst.graph, second), opts).lambda2;
  s.n1 = inst.params.n1;
  s.n2 = inst.params.n2;
  s.q = inst.params.q;
  return s;
}

struct SweepConfig {
  GenParams base;  // p is overwritten per grid point
  std::vector<double> p_grid;
  std::size_t trials = 1;
  std::size_t threads = 1;
  LanczosOptions solver;

  void validate() const {
    if (p_grid.empty()) throw DataError("sweep: p grid is empty");
    if (trials < 1) throw DataError("sweep: trials must be >= 1");
    GenParams probe = base;
    for (double p : p_grid) {
      probe.p = p;
      probe.validate();
    }
  }
};

inline SweepRow run_sweep_trial(const SweepConfig& cfg, double p, std::size_t trial) {
  SweepRow row;
  row.p = p;
  row.q = cfg.base.q;
  row.trial = trial;
  row.seed = derive_seed(cfg.base.seed, {grid_key(p), trial});
  try {
    GenParams params = cfg.base;
    params.p = p;
    params.seed = row.seed;
    const CommunityInstance inst = generate_sbm(params);
    const double n = static_cast<double>(params.n());

    const Detection det = detect_communities(inst.graph, cfg.solver);
    row.lambda2_over_n = det.spectral.lambda2 / n;
    row.detectability = detectability(det.partition, inst.truth);
    const auto blocks = fiedler_block_structure(det.spectral.fiedler, inst.truth);
    row.sign_agreement_1 = blocks.sign_agreement[0];
    row.sign_agreement_2 = blocks.sign_agreement[1];
    row.ones_projection_1 = blocks.ones_projection[0];
    row.ones_projection_2 = blocks.ones_projection[1];
    row.opposite_signs = blocks.opposite_majorities ? 1.0 : 0.0;

    const ThresholdPrediction pred = predict_threshold(realized_spectra(inst, cfg.solver));
    if (pred.p_star) row.p_star_realized = *pred.p_star;
    row.p_lb = pred.p_lb;
    row.p_ub = pred.p_ub;
    row.c_star = pred.c_star;

    try {
      row.regime = to_string(assess(inst.graph, det.partition, cfg.solver).regime);
    } catch (const DegenerateError&) {
      row.regime = "degenerate";
    }
  } catch (const ConvergenceError&) {
    row.status = "nonconvergence";
  } catch (const DegenerateError&) {
    row.status = "degenerate";
  } catch (const DataError&) {
    row.status = "data_error";
  }
  return row;
}

/// Rows ordered by (p, trial).
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t total = cfg.p_grid.size() * cfg.trials;
  std::vector<SweepRow> rows(total);
  parallel_for(total, cfg.threads, [&](std::size_t k) {
    rows[k] = run_sweep_trial(cfg, cfg.p_grid[k / cfg.trials], k % cfg.trials);
  });
  return rows;
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for one sample).
struct Moments {
  std::size_t count = 0;
  double mean = std::nan("");
  double stddev = std::nan("");
};

inline Moments moments(std::span<const double> xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return m;
}

struct SweepSummary {
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t ok = 0;
  Moments lambda2_over_n, detectability, p_star_realized, c_star;
  double frac_reliable = 0.0, frac_intermediate = 0.0, frac_unreliable = 0.0,
         frac_degenerate = 0.0;
};

inline std::vector<SweepSummary> summarize_sweep(std::span<const SweepRow> rows) {
  std::vector<SweepSummary> out;
  for (std::size_t begin = 0; begin < rows.size();) {
    std::size_t end = begin;
    while (end < rows.size() && rows[end].p == rows[begin].p) ++end;
    SweepSummary s;
    s.p = rows[begin].p;
    s.trials = end - begin;
    std::vector<double> lam, det, pstar, cstar;
    std::size_t rel = 0, mid = 0, unrel = 0, degen = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const SweepRow& r = rows[i];
      if (r.status != "ok") continue;
      ++s.ok;
      if (r.lambda2_over_n) lam.push_back(*r.lambda2_over_n);
      if (r.detectability) det.push_back(*r.detectability);
      if (r.p_star_realized) pstar.push_back(*r.p_star_realized);
      if (r.c_star) cstar.push_back(*r.c_star);
      rel += r.regime == "reliable";
      mid += r.regime == "intermediate";
      unrel += r.regime == "unreliable";
      degen += r.regime == "degenerate";
    }
    s.lambda2_over_n = moments(lam);
    s.detectability = moments(det);
    s.p_star_realized = moments(pstar);
    s.c_star = moments(cstar);
    if (s.ok > 0) {
      const double k = static_cast<double>(s.ok);
      s.frac_reliable = static_cast<double>(rel) / k;
      s.frac_intermediate = static_cast<double>(mid) / k;
      s.frac_unreliable = static_cast<double>(unrel) / k;
      s.frac_degenerate = static_cast<double>(degen) / k;
    }
    out.push_back(s);
    begin = end;
  }
  return out;
}

inline SummaryTable sweep_summary_table(std::span<const SweepSummary> summaries) {
  SummaryTable t;
  t.version = "# specphase-sweep-summary v1";
  t.header =
      "p,trials,ok,lambda2_over_n_mean,lambda2_over_n_std,detectability_mean,detectability_std,"
      "p_star_mean,p_star_std,c_star_mean,c_star_std,frac_reliable,frac_intermediate,"
      "frac_unreliable,frac_degenerate";
  for (const auto& s : summaries) {
    t.rows.push_back({format_double(s.p), std::to_string(s.trials), std::to_string(s.ok),
                      format_double(s.lambda2_over_n.mean), format_double(s.lambda2_over_n.stddev),
                      format_double(s.detectability.mean), format_double(s.detectability.stddev),
                      format_double(s.p_star_realized.mean),
                      format_double(s.p_star_realized.stddev), format_double(s.c_star.mean),
                      format_double(s.c_star.stddev), format_double(s.frac_reliable),
                      format_double(s.frac_intermediate), format_double(s.frac_unreliable),
                      format_double(s.frac_degenerate)});
  }
  return t;
}

struct AssessConfig {
  std::vector<double> q_grid;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  LanczosOptions solver;
};

inline AssessRow run_assess_trial(const SparseGraph& g, const std::vector<int>* truth,
                                  const AssessConfig& cfg, double q, std::size_t trial) {
  AssessRow row;
  row.q = q;
  row.trial = trial;
  row.seed = derive_seed(cfg.seed, {grid_key(q), trial});
  try {
    const SparseGraph noisy = add_noise(g, q, row.seed);
    const Detection det = detect_communities(noisy, cfg.solver);
    row.lambda2 = det.spectral.lambda2;
    row.n1_hat = static_cast<double>(det.partition.sizes[0]);
    row.n2_hat = static_cast<double>(det.partition.sizes[1]);
    if (truth) row.detectability = detectability(det.partition, *truth);
    try {
      const AssessmentReport rep = assess(noisy, det.partition, cfg.solver);
      row.p_hat = rep.p_hat;
      row.p_hat_lb = rep.p_hat_lb;
      row.p_hat_ub = rep.p_hat_ub;
      row.regime = to_string(rep.regime);
    } catch (const DegenerateError&) {
      row.regime = "degenerate";
      row.status = "degenerate";
    }
  } catch (const ConvergenceError&) {
    row.status = "nonconvergence";
  } catch (const DegenerateError&) {
    row.regime = "degenerate";
    row.status = "degenerate";
  } catch (const DataError&) {
    row.status = "data_error";
  }
  return row;
}

/// Rows ordered by (q, trial). `truth` may be null when no labels are known.
inline std::vector<AssessRow> run_assess(const SparseGraph& g, const std::vector<int>* truth,
                                         const AssessConfig& cfg) {
  if (cfg.q_grid.empty()) throw DataError("assess: q grid is empty");
  if (cfg.trials < 1) throw DataError("assess: trials must be >= 1");
  for (double q : cfg.q_grid) detail::check_probability(q);
  if (truth && truth->size() != g.num_nodes()) throw DataError("assess: label count mismatch");
  const std::size_t total = cfg.q_grid.size() * cfg.trials;
  std::vector<AssessRow> rows(total);
  parallel_for(total, cfg.threads, [&](std::size_t k) {
    rows[k] = run_assess_trial(g, truth, cfg, cfg.q_grid[k / cfg.trials], k % cfg.trials);
  });
  return rows;
}

struct AssessSummary {
  double q = 0.0;
  std::size_t trials = 0;
  Moments detectability, p_hat_lb, p_hat, p_hat_ub;
  double frac_reliable = 0.0, frac_intermediate = 0.0, frac_unreliable = 0.0,
         frac_degenerate = 0.0, frac_error = 0.0;
};

/// Regime fractions are over all trials of a q value, so the four regime
/// fractions and the error fraction sum to one.
inline std::vector<AssessSummary> summarize_assess(std::span<const AssessRow> rows) {
  std::vector<AssessSummary> out;
  for (std::size_t begin = 0; begin < rows.size();) {
    std::size_t end = begin;
    while (end < rows.size() && rows[end].q == rows[begin].q) ++end;
    AssessSummary s;
    s.q = rows[begin].q;
    s.trials = end - begin;
    std::vector<double> det, lb, ph, ub;
    std::size_t rel = 0, mid = 0, unrel = 0, degen = 0, err = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const AssessRow& r = rows[i];
      if (r.detectability) det.push_back(*r.detectability);
      if (r.p_hat_lb) lb.push_back(*r.p_hat_lb);
      if (r.p_hat) ph.push_back(*r.p_hat);
      if (r.p_hat_ub) ub.push_back(*r.p_hat_ub);
      rel += r.regime == "reliable";
      mid += r.regime == "intermediate";
      unrel += r.regime == "unreliable";
      degen += r.regime == "degenerate";
      err += r.status != "ok" && r.status != "degenerate";
    }
    s.detectability = moments(det);
    s.p_hat_lb = moments(lb);
    s.p_hat = moments(ph);
    s.p_hat_ub = moments(ub);
    const double k = static_cast<double>(s.trials);
    s.frac_reliable = static_cast<double>(rel) / k;
    s.frac_intermediate = static_cast<double>(mid) / k;
    s.frac_unreliable = static_cast<double>(unrel) / k;
    s.frac_degenerate = static_cast<double>(degen) / k;
    s.frac_error = static_cast<double>(err) / k;
    out.push_back(s);
    begin = end;
  }
  return out;
}

inline SummaryTable assess_summary_table(std::span<const AssessSummary> summaries) {
  SummaryTable t;
  t.version = "# specphase-assess-summary v1";
  t.header =
      "q,trials,detectability_mean,detectability_std,p_hat_lb_mean,p_hat_lb_std,p_hat_mean,"
      "p_hat_std,p_hat_ub_mean,p_hat_ub_std,frac_reliable,frac_intermediate,frac_unreliable,"
      "frac_degenerate,frac_error";
  for (const auto& s : summaries) {
    t.rows.push_back({format_double(s.q), std::to_string(s.trials),
                      format_double(s.detectability.mean), format_double(s.detectability.stddev),
                      format_double(s.p_hat_lb.mean), format_double(s.p_hat_lb.stddev),
                      format_double(s.p_hat.mean), format_double(s.p_hat.stddev),
                      format_double(s.p_hat_ub.mean), format_double(s.p_hat_ub.stddev),
                      format_double(s.frac_reliable), format_double(s.frac_intermediate),
                      format_double(s.frac_unreliable), format_double(s.frac_degenerate),
                      format_double(s.frac_error)});
  }
  return t;
}

}  // namespace specphase
