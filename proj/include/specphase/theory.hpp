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

// Closed-form predictors for the detectability phase transition of spectral
// bisection on a two-community graph with ER(q) noise.
//
// With L_i the Laplacian of community i (noise included), m = min(lambda2(L_1),
// lambda2(L_2)) and n = n1 + n2:
//
//   p_ub = 2m / (n - |n1 - n2|) - q
//   p_lb = 2m / (n + |n1 - n2|) - q
//   c*   = m / n
//
// Below the critical value lambda2(L)/n tracks t = p + q; above it tracks
// t/2 + c* (exactly when n1 = n2, within an envelope otherwise). Negative
// bounds are returned unclamped: no reliable regime exists.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "specphase/error.hpp"

namespace specphase {

struct CommunitySpectra {
  double lambda2_1 = 0.0;
  double lambda2_2 = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double q = 0.0;

  std::size_t n() const { return n1 + n2; }
  double size_gap() const { return std::abs(static_cast<double>(n1) - static_cast<double>(n2)); }
  // lambda_1 + lambda_2 - |lambda_1 - lambda_2|, i.e. twice the smaller one.
  double twice_min_lambda2() const {
    return lambda2_1 + lambda2_2 - std::abs(lambda2_1 - lambda2_2);
  }
};

inline double p_upper_bound(const CommunitySpectra& s) {
  const double denom = static_cast<double>(s.n()) - s.size_gap();
  if (denom <= 0.0) throw DataError("p_upper_bound: both communities must be nonempty");
  return s.twice_min_lambda2() / denom - s.q;
}

inline double p_lower_bound(const CommunitySpectra& s) {
  const double denom = static_cast<double>(s.n()) + s.size_gap();
  if (denom <= 0.0) throw DataError("p_lower_bound: empty graph");
  return s.twice_min_lambda2() / denom - s.q;
}

/// Critical value for equal community sizes, where the two bounds meet.
inline double p_star_equal_sizes(const CommunitySpectra& s) {
  if (s.n1 != s.n2) {
    throw DataError("p_star_equal_sizes: sizes differ (" + std::to_string(s.n1) + " vs " +
                    std::to_string(s.n2) + ")");
  }
  if (s.n1 == 0) throw DataError("p_star_equal_sizes: empty communities");
  return s.twice_min_lambda2() / static_cast<double>(s.n()) - s.q;
}

inline double c_star(const CommunitySpectra& s) {
  if (s.n() == 0) throw DataError("c_star: empty graph");
  return s.twice_min_lambda2() / (2.0 * static_cast<double>(s.n()));
}

struct ThresholdPrediction {
  double p_lb = 0.0;
  double p_ub = 0.0;
  std::optional<double> p_star;  // only when n1 == n2
  double c_star = 0.0;
};

inline ThresholdPrediction predict_threshold(const CommunitySpectra& s) {
  ThresholdPrediction out;
  out.p_lb = p_lower_bound(s);
  out.p_ub = p_upper_bound(s);
  out.c_star = c_star(s);
  if (s.n1 == s.n2) {
    out.p_star = p_star_equal_sizes(s);
    out.p_lb = out.p_ub = *out.p_star;
  }
  return out;
}

enum class AsymptoteCase { Case1, Case2 };

/// Predicted range of lambda2(L)/n. Case 1 and equal-size Case 2 are points
/// (lower == upper); unequal-size Case 2 is an envelope around t/2 + c*.
struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
};

inline Envelope lambda2_asymptote(double t, AsymptoteCase regime, const CommunitySpectra& s) {
  if (!(t >= 0.0 && t <= 2.0)) throw DataError("lambda2_asymptote: t outside [0, 2]");
  if (regime == AsymptoteCase::Case1) return {t, t};
  const double centre = t / 2.0 + c_star(s);
  const double half_width = s.size_gap() * t / (2.0 * static_cast<double>(s.n()));
  return {centre - half_width, centre + half_width};
}

struct SbmBounds {
  double p_lb = 0.0;
  double p_ub = 0.0;
};

/// Bounds for block-model communities, plugging lambda2(L_i) = n_i (p_i + q)
/// into the general bounds, with c = n1 / n2. The size-imbalance noise term
/// enters with opposite signs in the two numerators; at c = 1 both reduce to
/// min(p1, p2), independent of q.
inline SbmBounds sbm_bounds(double p1, double p2, double c, double q) {
  if (!(c > 0.0)) throw DataError("sbm_bounds: c must be positive");
  const double imbalance = std::abs(1.0 - c);
  const double shared = c * p1 + p2 - std::abs(c * p1 - p2 + (c - 1.0) * q);
  SbmBounds out;
  out.p_ub = (shared + imbalance * q) / (1.0 + c - imbalance);
  out.p_lb = (shared - imbalance * q) / (1.0 + c + imbalance);
  return out;
}

}  // namespace specphase
