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


#include "specphase/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace specphase {
namespace {

SweepConfig small_sweep() {
  SweepConfig cfg;
  cfg.base.n1 = 60;
  cfg.base.n2 = 60;
  cfg.base.p1 = cfg.base.p2 = 0.3;
  cfg.base.q = 0.05;
  cfg.base.seed = 2024;
  cfg.p_grid = {0.02, 0.1, 0.3};
  cfg.trials = 4;
  return cfg;
}

TEST(GridTest, InclusiveStop) {
  const auto g = make_grid(0.05, 0.35, 0.025);
  ASSERT_EQ(g.size(), 13u);
  EXPECT_DOUBLE_EQ(g.front(), 0.05);
  EXPECT_NEAR(g.back(), 0.35, 1e-12);
  EXPECT_EQ(make_grid(0.1, 0.1, 0.5).size(), 1u);
  EXPECT_THROW(make_grid(0.0, 1.0, 0.0), DataError);
  EXPECT_THROW(make_grid(1.0, 0.0, 0.1), DataError);
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (std::size_t threads : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelForTest, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(20, 4,
                            [](std::size_t i) {
                              if (i == 13) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(ThreadsTest, EnvironmentFallback) {
  ::setenv("SPECPHASE_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(0), 3u);
  EXPECT_EQ(resolve_threads(2), 2u);
  ::setenv("SPECPHASE_THREADS", "lots", 1);
  EXPECT_EQ(resolve_threads(0), 1u);
  ::unsetenv("SPECPHASE_THREADS");
  EXPECT_EQ(resolve_threads(0), 1u);
}

TEST(MomentsTest, SampleStatistics) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const Moments m = moments(xs);
  EXPECT_EQ(m.count, 4u);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.stddev, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_TRUE(std::isnan(moments(std::vector<double>{}).mean));
  EXPECT_EQ(moments(std::vector<double>{7.0}).stddev, 0.0);
}

TEST(SweepTest, RowCountOrderAndContent) {
  const SweepConfig cfg = small_sweep();
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), cfg.p_grid.size() * cfg.trials);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].p, cfg.p_grid[k / cfg.trials]);
    EXPECT_EQ(rows[k].trial, k % cfg.trials);
    EXPECT_EQ(rows[k].q, cfg.base.q);
    EXPECT_EQ(rows[k].status, "ok");
    ASSERT_TRUE(rows[k].p_star_realized.has_value());
    EXPECT_EQ(*rows[k].p_lb, *rows[k].p_ub);
    EXPECT_GE(*rows[k].detectability, 0.5);
  }
  // Distinct seeds across the whole sweep.
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) EXPECT_NE(rows[a].seed, rows[b].seed);
  }
}

TEST(SweepTest, ByteIdenticalAcrossThreadCounts) {
  SweepConfig cfg = small_sweep();
  const std::string one = format_rows<SweepRow>(run_sweep(cfg));
  cfg.threads = 4;
  EXPECT_EQ(format_rows<SweepRow>(run_sweep(cfg)), one);
  cfg.threads = 1;
  EXPECT_EQ(format_rows<SweepRow>(run_sweep(cfg)), one);
}

TEST(SweepTest, RefiningGridKeepsExistingTrials) {
  SweepConfig coarse = small_sweep();
  SweepConfig fine = coarse;
  fine.p_grid = {0.02, 0.06, 0.1, 0.2, 0.3};
  const auto a = run_sweep(coarse);
  const auto b = run_sweep(fine);
  for (const SweepRow& r : a) {
    bool found = false;
    for (const SweepRow& s : b) {
      if (s.p == r.p && s.trial == r.trial) {
        EXPECT_EQ(s, r);
        found = true;
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(SweepTest, SolverFailureBecomesStatusRow) {
  SweepConfig cfg = small_sweep();
  cfg.base.n1 = cfg.base.n2 = 300;
  cfg.p_grid = {0.1};
  cfg.trials = 2;
  cfg.solver.max_iter = 1;
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "nonconvergence");
    EXPECT_FALSE(r.detectability.has_value());
  }
  const auto summary = summarize_sweep(rows);
  ASSERT_EQ(summary.size(), 1u);
  EXPECT_EQ(summary[0].ok, 0u);
  EXPECT_TRUE(std::isnan(summary[0].detectability.mean));
}

TEST(SweepTest, InvalidConfig) {
  SweepConfig cfg = small_sweep();
  cfg.p_grid.clear();
  EXPECT_THROW(run_sweep(cfg), DataError);
  cfg = small_sweep();
  cfg.trials = 0;
  EXPECT_THROW(run_sweep(cfg), DataError);
  cfg = small_sweep();
  cfg.p_grid = {0.1, 1.5};
  EXPECT_THROW(run_sweep(cfg), DataError);
}

TEST(SweepTest, SummaryAggregatesPerGridPoint) {
  const SweepConfig cfg = small_sweep();
  const auto rows = run_sweep(cfg);
  const auto summary = summarize_sweep(rows);
  ASSERT_EQ(summary.size(), cfg.p_grid.size());
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const SweepSummary& s = summary[i];
    EXPECT_EQ(s.p, cfg.p_grid[i]);
    EXPECT_EQ(s.trials, cfg.trials);
    double det = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) det += *rows[i * cfg.trials + t].detectability;
    EXPECT_NEAR(s.detectability.mean, det / static_cast<double>(cfg.trials), 1e-15);
    EXPECT_NEAR(s.frac_reliable + s.frac_intermediate + s.frac_unreliable + s.frac_degenerate,
                1.0, 1e-15);
  }
  const SummaryTable t = sweep_summary_table(summary);
  EXPECT_EQ(t.rows.size(), summary.size());
  EXPECT_EQ(format_summary(t).rfind("# specphase-sweep-summary v1\np,trials,ok,", 0), 0u);
}

TEST(AssessExperimentTest, DeterministicAndOrdered) {
  GenParams gp;
  gp.n1 = 60;
  gp.n2 = 45;
  gp.p1 = gp.p2 = 0.3;
  gp.p = 0.02;
  gp.seed = 5;
  const CommunityInstance inst = generate_sbm(gp);
  AssessConfig cfg;
  cfg.q_grid = {0.0, 0.05, 0.1};
  cfg.trials = 3;
  cfg.seed = 77;
  const auto a = run_assess(inst.graph, &inst.truth, cfg);
  cfg.threads = 3;
  const auto b = run_assess(inst.graph, &inst.truth, cfg);
  EXPECT_EQ(format_rows<AssessRow>(a), format_rows<AssessRow>(b));
  ASSERT_EQ(a.size(), 9u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].q, cfg.q_grid[k / 3]);
    EXPECT_EQ(a[k].trial, k % 3);
  }
  // Without noise the graph is untouched, so every trial agrees.
  EXPECT_EQ(a[0].p_hat, a[1].p_hat);
  EXPECT_EQ(a[0].detectability, a[2].detectability);

  const auto summary = summarize_assess(a);
  ASSERT_EQ(summary.size(), 3u);
  for (const auto& s : summary) {
    EXPECT_NEAR(s.frac_reliable + s.frac_intermediate + s.frac_unreliable + s.frac_degenerate +
                    s.frac_error,
                1.0, 1e-15);
  }
  EXPECT_EQ(assess_summary_table(summary).rows.size(), 3u);
}

TEST(AssessExperimentTest, WithoutLabels) {
  const SparseGraph g = testing::two_cliques(6, 7);
  AssessConfig cfg;
  cfg.q_grid = {0.0};
  const auto rows = run_assess(g, nullptr, cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].detectability.has_value());
  EXPECT_EQ(rows[0].regime, "reliable");
  EXPECT_EQ(*rows[0].p_hat, 0.0);
}

TEST(AssessExperimentTest, InvalidConfig) {
  const SparseGraph g = testing::two_cliques(6, 7);
  AssessConfig cfg;
  EXPECT_THROW(run_assess(g, nullptr, cfg), DataError);
  cfg.q_grid = {1.2};
  EXPECT_THROW(run_assess(g, nullptr, cfg), DataError);
  cfg.q_grid = {0.1};
  const std::vector<int> short_truth{0, 1};
  EXPECT_THROW(run_assess(g, &short_truth, cfg), DataError);
}

TEST(RealizedSpectraTest, MatchesDirectComputation) {
  GenParams gp;
  gp.n1 = 50;
  gp.n2 = 70;
  gp.p1 = 0.4;
  gp.p2 = 0.2;
  gp.p = 0.05;
  gp.q = 0.02;
  gp.seed = 8;
  const CommunityInstance inst = generate_sbm(gp);
  const CommunitySpectra s = realized_spectra(inst);
  std::vector<NodeId> a(50), b(70);
  for (NodeId i = 0; i < 50; ++i) a[i] = i;
  for (NodeId i = 0; i < 70; ++i) b[i] = 50 + i;
  EXPECT_NEAR(s.lambda2_1, fiedler_dense_oracle(induced_subgraph(inst.graph, a)).lambda2, 1e-8);
  EXPECT_NEAR(s.lambda2_2, fiedler_dense_oracle(induced_subgraph(inst.graph, b)).lambda2, 1e-8);
  EXPECT_EQ(s.n1, 50u);
  EXPECT_EQ(s.n2, 70u);
  EXPECT_EQ(s.q, 0.02);
}

}  // namespace
}  // namespace specphase
