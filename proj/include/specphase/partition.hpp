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
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "specphase/error.hpp"
#include "specphase/graph.hpp"
#include "specphase/spectral.hpp"

namespace specphase {

/// Two-way node assignment. Side 0 holds the values below split_value.
struct Partition {
  std::vector<int> assignment;
  std::array<std::size_t, 2> sizes{0, 0};
  double split_value = 0.0;

  std::vector<NodeId> members(int side) const {
    std::vector<NodeId> out;
    out.reserve(sizes[static_cast<std::size_t>(side)]);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] == side) out.push_back(static_cast<NodeId>(i));
    }
    return out;
  }
};

/// Exact two-means clustering of scalars.
///
/// Scans every split of the sorted values and keeps the one with the least
/// within-cluster sum of squares. Only splits between distinct values are
/// considered, so equal values always land together. Ties go to the smaller
/// left cluster.
inline Partition kmeans_1d_two(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw DegenerateError("kmeans_1d_two: need at least 2 values");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double lo = values[order.front()];
  const double hi = values[order.back()];
  if (hi - lo <= 1e-12) throw DegenerateError("kmeans_1d_two: all values equal");

  // Centre first so prefix sums stay well conditioned.
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  std::vector<double> sum(n + 1, 0.0), sumsq(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = values[order[k]] - mean;
    sum[k + 1] = sum[k] + v;
    sumsq[k + 1] = sumsq[k] + v * v;
  }
  auto sse = [&](std::size_t from, std::size_t to) {
    const double cnt = static_cast<double>(to - from);
    const double s = sum[to] - sum[from];
    return std::max(0.0, (sumsq[to] - sumsq[from]) - s * s / cnt);
  };

  std::size_t best_split = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  const double tie = 1e-12 * std::max(1.0, sumsq[n]);
  for (std::size_t k = 1; k < n; ++k) {
    if (!(values[order[k - 1]] < values[order[k]])) continue;
    const double cost = sse(0, k) + sse(k, n);
    if (cost < best_cost - tie) {
      best_cost = cost;
      best_split = k;
    }
  }

  Partition part;
  part.assignment.assign(n, 1);
  for (std::size_t k = 0; k < best_split; ++k) part.assignment[order[k]] = 0;
  part.sizes = {best_split, n - best_split};
  part.split_value = 0.5 * (values[order[best_split - 1]] + values[order[best_split]]);
  return part;
}

/// Fraction of nodes whose label matches, maximised over the two polarities.
/// Truth labels outside {0, 1} never match (e.g. a third class that a two-way
/// split cannot capture).
inline double detectability(const Partition& part, std::span<const int> truth) {
  if (part.assignment.size() != truth.size()) {
    throw DataError("detectability: partition has " + std::to_string(part.assignment.size()) +
                    " nodes, truth has " + std::to_string(truth.size()));
  }
  if (truth.empty()) throw DataError("detectability: empty input");
  std::size_t same = 0, flipped = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == part.assignment[i]) ++same;
    if (truth[i] == 1 - part.assignment[i] && (truth[i] == 0 || truth[i] == 1)) ++flipped;
  }
  return static_cast<double>(std::max(same, flipped)) / static_cast<double>(truth.size());
}

struct Detection {
  Partition partition;
  SpectralResult spectral;
};

/// Spectral bisection: Fiedler vector, then exact 1-D two-means on its entries.
inline Detection detect_communities(const SparseGraph& g, const LanczosOptions& opts = {}) {
  SpectralResult spectral = fiedler(g, opts);
  Partition part = kmeans_1d_two(spectral.fiedler);
  return {std::move(part), std::move(spectral)};
}

/// Sign structure of a Fiedler vector split along ground truth. With y_i the
/// restriction to community i:
///   sign_agreement[i] = share of y_i entries carrying y_i's majority sign
///   ones_projection[i] = |1^T y_i| / sqrt(n_i)
/// Below threshold both sign agreements approach 1 with opposite majority
/// signs; above it both projections approach 0.
struct FiedlerBlockStructure {
  std::array<double, 2> sign_agreement{0.0, 0.0};
  std::array<double, 2> ones_projection{0.0, 0.0};
  bool opposite_majorities = false;
};

inline FiedlerBlockStructure fiedler_block_structure(std::span<const double> y,
                                                     std::span<const int> truth) {
  if (y.size() != truth.size()) throw DataError("fiedler_block_structure: length mismatch");
  std::array<std::size_t, 2> count{0, 0}, positive{0, 0};
  std::array<double, 2> sum{0.0, 0.0};
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto c = static_cast<std::size_t>(truth[i]);
    if (c > 1) throw DataError("fiedler_block_structure: labels must be 0/1");
    ++count[c];
    sum[c] += y[i];
    if (y[i] > 0.0) ++positive[c];
  }
  FiedlerBlockStructure out;
  std::array<int, 2> majority{0, 0};
  for (std::size_t c = 0; c < 2; ++c) {
    if (count[c] == 0) throw DataError("fiedler_block_structure: empty community");
    const std::size_t pos = positive[c];
    const std::size_t neg = count[c] - pos;
    out.sign_agreement[c] =
        static_cast<double>(std::max(pos, neg)) / static_cast<double>(count[c]);
    majority[c] = pos >= neg ? 1 : -1;
    out.ones_projection[c] = std::abs(sum[c]) / std::sqrt(static_cast<double>(count[c]));
  }
  out.opposite_majorities = majority[0] != majority[1];
  return out;
}

}  // namespace specphase
