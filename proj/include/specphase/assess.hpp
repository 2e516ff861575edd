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

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "specphase/error.hpp"
#include "specphase/graph.hpp"
#include "specphase/partition.hpp"
#include "specphase/spectral.hpp"

namespace specphase {

enum class Regime { Reliable, Intermediate, Unreliable };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Reliable:
      return "reliable";
    case Regime::Intermediate:
      return "intermediate";
    case Regime::Unreliable:
      return "unreliable";
  }
  return "unknown";
}

/// Observable estimates of p and of the threshold bounds. Unlike the
/// theoretical bounds these carry no -q term, since q cannot be observed.
struct AssessmentReport {
  double p_hat = 0.0;
  double p_hat_lb = 0.0;
  double p_hat_ub = 0.0;
  Regime regime = Regime::Unreliable;
  std::array<std::size_t, 2> sizes{0, 0};
  std::array<double, 2> lambda2_hats{0.0, 0.0};
};

/// Relative slack on the regime boundaries; the estimated bounds inherit
/// roundoff from the eigensolver.
inline constexpr double kRegimeBoundarySlack = 1e-9;

/// Reaching the upper bound wins over reaching the lower one, so a tie at
/// p_hat_lb == p_hat_ub (equal sizes) classifies as unreliable.
inline Regime classify_regime(double p_hat, double p_hat_lb, double p_hat_ub) {
  if (p_hat >= p_hat_ub - kRegimeBoundarySlack * std::abs(p_hat_ub)) return Regime::Unreliable;
  if (p_hat <= p_hat_lb + kRegimeBoundarySlack * std::abs(p_hat_lb)) return Regime::Reliable;
  return Regime::Intermediate;
}

/// lambda2 of the subgraph induced by `nodes`. A single node has no second
/// eigenvalue; it is treated as having zero connectivity.
inline double side_connectivity(const SparseGraph& g, std::span<const NodeId> nodes,
                                const LanczosOptions& opts) {
  if (nodes.size() < 2) return 0.0;
  return fiedler(induced_subgraph(g, nodes), opts).lambda2;
}

inline AssessmentReport assess(const SparseGraph& g, const Partition& part,
                               const LanczosOptions& opts = {}) {
  const std::size_t n = g.num_nodes();
  if (part.assignment.size() != n) {
    throw DataError("assess: partition covers " + std::to_string(part.assignment.size()) +
                    " nodes, graph has " + std::to_string(n));
  }
  const auto [n1, n2] = part.sizes;
  if (n1 == 0 || n2 == 0) {
    throw DegenerateError("assess: one detected community is empty (sizes " +
                          std::to_string(n1) + ", " + std::to_string(n2) + ")");
  }

  std::size_t cross = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId j : g.neighbors(i)) {
      if (j > i && part.assignment[i] != part.assignment[j]) ++cross;
    }
  }

  AssessmentReport r;
  r.sizes = part.sizes;
  r.lambda2_hats = {side_connectivity(g, part.members(0), opts),
                    side_connectivity(g, part.members(1), opts)};
  const double l1 = r.lambda2_hats[0];
  const double l2 = r.lambda2_hats[1];
  const double twice_min = l1 + l2 - std::abs(l1 - l2);
  const double gap = std::abs(static_cast<double>(n1) - static_cast<double>(n2));
  r.p_hat = static_cast<double>(cross) / (static_cast<double>(n1) * static_cast<double>(n2));
  r.p_hat_lb = twice_min / (static_cast<double>(n) + gap);
  r.p_hat_ub = twice_min / (static_cast<double>(n) - gap);
  r.regime = classify_regime(r.p_hat, r.p_hat_lb, r.p_hat_ub);
  return r;
}

struct AssessedDetection {
  AssessmentReport report;
  Partition partition;
  SpectralResult spectral;
};

inline AssessedDetection assess_with_detection(const SparseGraph& g,
                                               const LanczosOptions& opts = {}) {
  Detection det = detect_communities(g, opts);
  AssessmentReport report = assess(g, det.partition, opts);
  return {report, std::move(det.partition), std::move(det.spectral)};
}

}  // namespace specphase
