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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "specphase/error.hpp"
#include "specphase/graph.hpp"
#include "specphase/rng.hpp"

namespace specphase {

enum class NoiseScope { All, Cross };

inline const char* to_string(NoiseScope s) { return s == NoiseScope::All ? "all" : "cross"; }

inline NoiseScope parse_noise_scope(const std::string& s) {
  if (s == "all") return NoiseScope::All;
  if (s == "cross") return NoiseScope::Cross;
  throw DataError("unknown noise scope '" + s + "' (expected all|cross)");
}

/// Two-block model with insertion-only noise.
struct GenParams {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double p1 = 0.0;  // within block 1
  double p2 = 0.0;  // within block 2
  double p = 0.0;   // across blocks
  double q = 0.0;   // noise insertion
  std::uint64_t seed = 0;
  NoiseScope noise_scope = NoiseScope::All;

  std::size_t n() const { return n1 + n2; }
  double c() const { return static_cast<double>(n1) / static_cast<double>(n2); }

  void validate() const {
    if (n1 < 2 || n2 < 2) {
      throw DataError("community sizes must be >= 2 (n1=" + std::to_string(n1) +
                      ", n2=" + std::to_string(n2) + ")");
    }
    auto check = [](const char* name, double v) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DataError(std::string("probability ") + name + "=" + std::to_string(v) +
                        " outside [0,1]");
      }
    };
    check("p1", p1);
    check("p2", p2);
    check("p", p);
    check("q", q);
  }
};

struct CommunityInstance {
  SparseGraph graph;         // observed, signal plus noise
  SparseGraph signal_graph;  // before noise
  std::vector<int> truth;    // 0 for nodes [0, n1), 1 for [n1, n)
  GenParams params;
};

namespace detail {

inline void check_probability(double prob) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw DataError("probability " + std::to_string(prob) + " outside [0,1]");
  }
}

// Visits each index in [0, total) independently with probability prob, in
// increasing order, using geometric skips.
template <typename Visit>
void bernoulli_indices(std::uint64_t total, double prob, Rng& rng, Visit&& visit) {
  if (total == 0 || prob <= 0.0) return;
  if (prob >= 1.0) {
    for (std::uint64_t k = 0; k < total; ++k) visit(k);
    return;
  }
  const double log1m = std::log1p(-prob);
  std::uint64_t k = 0;
  for (;;) {
    const double skip = rng.geometric_skip(log1m);
    if (skip >= static_cast<double>(total - k)) return;
    k += static_cast<std::uint64_t>(skip);
    visit(k);
    if (++k >= total) return;
  }
}

// Pairs {offset+i, offset+j}, 0 <= i < j < m, each kept with probability prob.
inline void sample_triangle(NodeId offset, std::size_t m, double prob, Rng& rng,
                            std::vector<Edge>& out) {
  if (m < 2) return;
  const std::uint64_t total = static_cast<std::uint64_t>(m) * (m - 1) / 2;
  // Row i holds columns i+1..m-1; start_of_row tracks the linear index of (i, i+1).
  std::uint64_t row = 0;
  std::uint64_t start_of_row = 0;
  bernoulli_indices(total, prob, rng, [&](std::uint64_t k) {
    while (k >= start_of_row + (m - 1 - row)) {
      start_of_row += m - 1 - row;
      ++row;
    }
    const std::uint64_t col = row + 1 + (k - start_of_row);
    out.emplace_back(static_cast<NodeId>(offset + row), static_cast<NodeId>(offset + col));
  });
}

// Pairs {off1+i, off2+j}, i < m1, j < m2, each kept with probability prob.
inline void sample_rectangle(NodeId off1, std::size_t m1, NodeId off2, std::size_t m2,
                             double prob, Rng& rng, std::vector<Edge>& out) {
  const std::uint64_t total = static_cast<std::uint64_t>(m1) * m2;
  bernoulli_indices(total, prob, rng, [&](std::uint64_t k) {
    out.emplace_back(static_cast<NodeId>(off1 + k / m2), static_cast<NodeId>(off2 + k % m2));
  });
}

}  // namespace detail

/// Samples a block-model instance. Signal edges are Bernoulli(p1), (p2), (p)
/// within block 1, within block 2, and across. Noise then inserts every
/// still-absent pair with probability q, which equals the union of the signal
/// graph with an independent ER(q) overlay. With NoiseScope::Cross only
/// cross pairs receive noise.
inline CommunityInstance generate_sbm(const GenParams& params) {
  params.validate();
  const std::size_t n1 = params.n1;
  const std::size_t n2 = params.n2;
  Rng rng(params.seed);

  std::vector<Edge> signal;
  detail::sample_triangle(0, n1, params.p1, rng, signal);
  detail::sample_triangle(static_cast<NodeId>(n1), n2, params.p2, rng, signal);
  detail::sample_rectangle(0, n1, static_cast<NodeId>(n1), n2, params.p, rng, signal);

  std::vector<Edge> observed = signal;
  if (params.noise_scope == NoiseScope::All) {
    detail::sample_triangle(0, n1 + n2, params.q, rng, observed);
  } else {
    detail::sample_rectangle(0, n1, static_cast<NodeId>(n1), n2, params.q, rng, observed);
  }

  std::vector<int> truth(n1 + n2, 0);
  for (std::size_t i = n1; i < n1 + n2; ++i) truth[i] = 1;

  return CommunityInstance{SparseGraph::from_edges(n1 + n2, observed),
                           SparseGraph::from_edges(n1 + n2, signal), std::move(truth), params};
}

/// Inserts each absent pair of g independently with probability q.
inline SparseGraph add_noise(const SparseGraph& g, double q, std::uint64_t seed) {
  detail::check_probability(q);
  Rng rng(seed);
  std::vector<Edge> edges = g.edges();
  detail::sample_triangle(0, g.num_nodes(), q, rng, edges);
  return SparseGraph::from_edges(g.num_nodes(), edges);
}

}  // namespace specphase
