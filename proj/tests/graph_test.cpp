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

#include "specphase/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace specphase {
namespace {

using testing::complete_graph;
using testing::make_graph;
using testing::path_graph;
using testing::star_graph;

TEST(SparseGraphTest, StoresBothDirectionsAndCollapsesDuplicates) {
  const SparseGraph g = make_graph(3, {{0, 1}, {1, 0}, {1, 2}, {0, 1}});
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(SparseGraphTest, RejectsSelfLoopsOutOfRangeAndTinyGraphs) {
  EXPECT_THROW(make_graph(3, {{1, 1}}), DataError);
  EXPECT_THROW(make_graph(3, {{0, 3}}), DataError);
  EXPECT_THROW(make_graph(1, {}), DataError);
  EXPECT_THROW(make_graph(0, {}), DataError);
}

TEST(LaplacianQuadformTest, SingleEdge) {
  const std::vector<double> x{1.0, -1.0};
  EXPECT_DOUBLE_EQ(laplacian_quadform(complete_graph(2), x), 4.0);
}

TEST(LaplacianQuadformTest, OnesVectorIsInKernel) {
  const SparseGraph g = complete_graph(7);
  const std::vector<double> ones(7, 1.0);
  EXPECT_EQ(laplacian_quadform(g, ones), 0.0);
}

TEST(LaplacianQuadformTest, Path3) {
  const std::vector<double> x{1.0, 0.0, -1.0};
  EXPECT_DOUBLE_EQ(laplacian_quadform(path_graph(3), x), 2.0);
}

TEST(LaplacianQuadformTest, DimensionMismatch) {
  const std::vector<double> x{1.0, 2.0};
  EXPECT_THROW(laplacian_quadform(path_graph(3), x), DataError);
}

TEST(LaplacianQuadformTest, MatchesDenseFormOnRandomGraphs) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> size(2, 200);
  std::uniform_real_distribution<double> prob(0.02, 0.9), val(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const SparseGraph g = testing::naive_er(size(rng), prob(rng), rng);
    std::vector<double> x(g.num_nodes());
    for (double& v : x) v = val(rng);
    const double sparse = laplacian_quadform(g, x);
    const double dense = testing::dense_quadform(g, x);
    EXPECT_NEAR(sparse, dense, 1e-9 * std::max(1.0, std::abs(dense)));
    // Apply form agrees with the quadratic form.
    std::vector<double> lx(x.size());
    laplacian_apply(g, x, lx);
    double xlx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) xlx += x[i] * lx[i];
    EXPECT_NEAR(xlx, dense, 1e-9 * std::max(1.0, std::abs(dense)));
    EXPECT_GE(sparse, 0.0);
  }
}

TEST(LaplacianQuadformTest, PermutationEquivariance) {
  std::mt19937_64 rng(7);
  const SparseGraph g = testing::naive_er(60, 0.2, rng);
  std::vector<NodeId> perm(60);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const SparseGraph h = relabel(g, perm);

  // Node i of g is node perm[i] of h; carry x along with it.
  std::uniform_int_distribution<int> small(-4, 4);
  std::vector<double> x(60), xp(60);
  for (std::size_t i = 0; i < 60; ++i) {
    x[i] = small(rng);
    xp[perm[i]] = x[i];
  }
  EXPECT_EQ(laplacian_quadform(g, x), laplacian_quadform(h, xp));
}

TEST(DegreeVectorTest, KnownGraphs) {
  EXPECT_EQ(degree_vector(complete_graph(4)), (std::vector<std::size_t>{3, 3, 3, 3}));
  EXPECT_EQ(degree_vector(make_graph(3, {})), (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(degree_vector(path_graph(3)), (std::vector<std::size_t>{1, 2, 1}));
}

TEST(DegreeVectorTest, SumsToTwiceEdgeCount) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const SparseGraph g = testing::naive_er(80, 0.1 * (trial + 1) / 2.0, rng);
    const auto d = degree_vector(g);
    EXPECT_EQ(std::accumulate(d.begin(), d.end(), std::size_t{0}), 2 * g.num_edges());
  }
}

TEST(InducedSubgraphTest, CliqueRestriction) {
  const std::vector<NodeId> nodes{0, 1};
  EXPECT_EQ(induced_subgraph(complete_graph(4), nodes), complete_graph(2));
}

TEST(InducedSubgraphTest, AllNodesGivesCopy) {
  std::mt19937_64 rng(11);
  const SparseGraph g = testing::naive_er(30, 0.3, rng);
  std::vector<NodeId> all(30);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(induced_subgraph(g, all), g);
}

TEST(InducedSubgraphTest, StarLeavesAreIndependent) {
  const std::vector<NodeId> leaves{1, 2, 3};
  const SparseGraph sub = induced_subgraph(star_graph(4), leaves);
  EXPECT_EQ(sub.num_nodes(), 3u);
  EXPECT_EQ(sub.num_edges(), 0u);
}

TEST(InducedSubgraphTest, RelabelsInGivenOrder) {
  const std::vector<NodeId> nodes{2, 0};
  const SparseGraph sub = induced_subgraph(path_graph(3), nodes);  // 0-1-2, no 0-2 edge
  EXPECT_EQ(sub.num_edges(), 0u);
  const std::vector<NodeId> nodes2{2, 1};
  EXPECT_TRUE(induced_subgraph(path_graph(3), nodes2).has_edge(0, 1));
}

TEST(InducedSubgraphTest, Errors) {
  const SparseGraph g = path_graph(4);
  EXPECT_THROW(induced_subgraph(g, std::vector<NodeId>{}), DataError);
  EXPECT_THROW(induced_subgraph(g, std::vector<NodeId>{0, 4}), DataError);
  EXPECT_THROW(induced_subgraph(g, std::vector<NodeId>{1, 1}), DataError);
}

}  // namespace
}  // namespace specphase
