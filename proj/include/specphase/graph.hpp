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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specphase/error.hpp"

namespace specphase {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph in compressed sparse row form.
///
/// Every edge {i,j} is stored twice, once in row i and once in row j, so the
/// Laplacian product needs no symmetry branch. Rows are sorted. Instances are
/// immutable after construction and safe to share between threads.
class SparseGraph {
 public:
  /// Builds a graph on `n` nodes. Duplicate and reversed-duplicate edges
  /// collapse into one. Throws DataError on self-loops, out-of-range
  /// endpoints, or n < 2.
  static SparseGraph from_edges(std::size_t n, std::span<const Edge> edges) {
    if (n < 2) {
      throw DataError("graph needs at least 2 nodes, got " + std::to_string(n));
    }
    std::vector<std::size_t> counts(n + 1, 0);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) {
        throw DataError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                        ") out of range for n=" + std::to_string(n));
      }
      if (u == v) {
        throw DataError("self-loop at node " + std::to_string(u));
      }
      ++counts[u + 1];
      ++counts[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) counts[i + 1] += counts[i];

    std::vector<NodeId> adj(counts[n]);
    std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
    for (const auto& [u, v] : edges) {
      adj[fill[u]++] = v;
      adj[fill[v]++] = u;
    }

    // Sort and deduplicate each row, compacting in place.
    SparseGraph g;
    g.offsets_.assign(n + 1, 0);
    std::size_t write = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto first = adj.begin() + static_cast<std::ptrdiff_t>(counts[i]);
      auto last = adj.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]);
      std::sort(first, last);
      last = std::unique(first, last);
      for (auto it = first; it != last; ++it) adj[write++] = *it;
      g.offsets_[i + 1] = write;
    }
    adj.resize(write);
    adj.shrink_to_fit();
    g.adj_ = std::move(adj);
    return g;
  }

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::size_t num_edges() const { return adj_.size() / 2; }

  std::span<const NodeId> neighbors(std::size_t i) const {
    return {adj_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  bool has_edge(std::size_t i, std::size_t j) const {
    auto row = neighbors(i);
    return std::binary_search(row.begin(), row.end(), static_cast<NodeId>(j));
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < num_nodes(); ++i) d = std::max(d, degree(i));
    return d;
  }

  /// Edges as (i, j) with i < j, in row-major order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (std::size_t i = 0; i < num_nodes(); ++i) {
      for (NodeId j : neighbors(i)) {
        if (j > i) out.emplace_back(static_cast<NodeId>(i), j);
      }
    }
    return out;
  }

  friend bool operator==(const SparseGraph&, const SparseGraph&) = default;

 private:
  SparseGraph() = default;

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adj_;
};

/// d_i = number of neighbours of node i.
inline std::vector<std::size_t> degree_vector(const SparseGraph& g) {
  std::vector<std::size_t> d(g.num_nodes());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = g.degree(i);
  return d;
}

/// out = (D - A) x. Row order is fixed, so the result is deterministic.
inline void laplacian_apply(const SparseGraph& g, std::span<const double> x,
                            std::span<double> out) {
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = static_cast<double>(g.degree(i)) * x[i];
    for (NodeId j : g.neighbors(i)) acc -= x[j];
    out[i] = acc;
  }
}

/// x^T L x, evaluated as the sum over edges of (x_i - x_j)^2.
inline double laplacian_quadform(const SparseGraph& g, std::span<const double> x) {
  if (x.size() != g.num_nodes()) {
    throw DataError("quadform: vector length " + std::to_string(x.size()) +
                    " does not match n=" + std::to_string(g.num_nodes()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (NodeId j : g.neighbors(i)) {
      if (j > i) {
        const double d = x[i] - x[j];
        sum += d * d;
      }
    }
  }
  return sum;
}

/// Subgraph on `nodes`, relabelled 0..k-1 in the order given.
inline SparseGraph induced_subgraph(const SparseGraph& g, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw DataError("induced_subgraph: empty node set");
  constexpr NodeId kAbsent = static_cast<NodeId>(-1);
  std::vector<NodeId> local(g.num_nodes(), kAbsent);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const NodeId v = nodes[k];
    if (v >= g.num_nodes()) {
      throw DataError("induced_subgraph: node " + std::to_string(v) + " out of range");
    }
    if (local[v] != kAbsent) {
      throw DataError("induced_subgraph: node " + std::to_string(v) + " repeated");
    }
    local[v] = static_cast<NodeId>(k);
  }
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (NodeId j : g.neighbors(nodes[k])) {
      const NodeId lj = local[j];
      if (lj != kAbsent && lj > k) edges.emplace_back(static_cast<NodeId>(k), lj);
    }
  }
  return SparseGraph::from_edges(nodes.size(), edges);
}

/// Graph with node i renamed to perm[i].
inline SparseGraph relabel(const SparseGraph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.num_nodes()) throw DataError("relabel: permutation size mismatch");
  std::vector<Edge> edges = g.edges();
  for (auto& [u, v] : edges) {
    u = perm[u];
    v = perm[v];
  }
  return SparseGraph::from_edges(g.num_nodes(), edges);
}

}  // namespace specphase
