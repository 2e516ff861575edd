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

// Algebraic connectivity and Fiedler vector of a graph Laplacian.
//
// fiedler() runs Lanczos on L restricted to the complement of the all-ones
// vector, with full reorthogonalization. The projected tridiagonal problem is
// solved for its smallest eigenpair only, by Sturm bisection and inverse
// iteration, so each convergence check costs O(k).
//
// fiedler_dense_oracle() is an independent O(n^3) path built on cyclic Jacobi
// rotations. It shares no numerical code with the Lanczos path and exists to
// check it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specphase/error.hpp"
#include "specphase/graph.hpp"
#include "specphase/rng.hpp"

namespace specphase {

struct SpectralResult {
  double lambda2 = 0.0;
  std::vector<double> fiedler;  // unit norm, orthogonal to the ones vector
  std::size_t iterations = 0;
  double residual = 0.0;  // ||L y - lambda2 y||_2
};

struct LanczosOptions {
  /// Accept when ||L y - lambda y|| <= tol * max(1, lambda).
  double tol = 1e-8;
  /// 0 selects 10 * sqrt(n) + 200.
  std::size_t max_iter = 0;
  std::uint64_t seed = 0x5eed5eedULL;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void remove_mean(std::span<double> x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
}

// First entry with magnitude above 1e-12 is made positive.
inline void canonical_sign(std::span<double> y) {
  for (double v : y) {
    if (std::abs(v) > 1e-12) {
      if (v < 0.0) {
        for (double& w : y) w = -w;
      }
      return;
    }
  }
}

inline double residual_norm(const SparseGraph& g, std::span<const double> y, double lambda) {
  std::vector<double> ly(y.size());
  laplacian_apply(g, y, ly);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = ly[i] - lambda * y[i];
    s += r * r;
  }
  return std::sqrt(s);
}

// Symmetric tridiagonal matrix: diag[0..k), off[i] couples i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  double gershgorin_radius(std::size_t i) const {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < size()) r += std::abs(off[i]);
    return r;
  }

  // Number of eigenvalues strictly below x.
  std::size_t count_below(double x, double pivmin) const {
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const double coupling = i == 0 ? 0.0 : off[i - 1] * off[i - 1] / d;
      d = diag[i] - x - coupling;
      if (std::abs(d) < pivmin) d = -pivmin;
      if (d < 0.0) ++count;
    }
    return count;
  }

  double smallest_eigenvalue() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const double r = gershgorin_radius(i);
      lo = std::min(lo, diag[i] - r);
      hi = std::max(hi, diag[i] + r);
      scale = std::max(scale, std::abs(diag[i]) + r);
    }
    hi = std::min(hi, *std::min_element(diag.begin(), diag.end()));
    const double eps = std::numeric_limits<double>::epsilon();
    const double pivmin = std::max(scale, 1.0) * std::numeric_limits<double>::min() / eps;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin) break;
      if (count_below(mid, pivmin) >= 1) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  // Unit eigenvector for an eigenvalue estimate `shift`, by inverse iteration
  // with a partially pivoted tridiagonal LU factorization.
  std::vector<double> eigenvector(double shift) const {
    const std::size_t k = size();
    std::vector<double> x(k);
    if (k == 1) {
      x[0] = 1.0;
      return x;
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(diag[i]) + gershgorin_radius(i));
    const double tiny = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();

    std::vector<double> dl(off), d(k), du(off), du2(k, 0.0);
    std::vector<char> swapped(k, 0);
    for (std::size_t i = 0; i < k; ++i) d[i] = diag[i] - shift;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = tiny;
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < k) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    if (d[k - 1] == 0.0) d[k - 1] = tiny;

    for (std::size_t i = 0; i < k; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
    for (int sweep = 0; sweep < 3; ++sweep) {
      for (std::size_t i = 0; i + 1 < k; ++i) {
        if (swapped[i]) {
          const double temp = x[i];
          x[i] = x[i + 1];
          x[i + 1] = temp - dl[i] * x[i];
        } else {
          x[i + 1] -= dl[i] * x[i];
        }
      }
      x[k - 1] /= d[k - 1];
      x[k - 2] = (x[k - 2] - du[k - 2] * x[k - 1]) / d[k - 2];
      for (std::size_t i = k - 2; i-- > 0;) {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
      }
      const double nrm = norm2(x);
      for (double& v : x) v /= nrm;
    }
    return x;
  }
};

}  // namespace detail

/// Second-smallest eigenpair of L = D - A.
///
/// Disconnected graphs give lambda2 = 0 with a unit vector in the span of the
/// component indicators. When lambda2 is repeated, any vector of its
/// eigenspace may be returned. Throws ConvergenceError if the residual bound
/// is not met within the iteration budget.
inline SpectralResult fiedler(const SparseGraph& g, const LanczosOptions& opts = {}) {
  const std::size_t n = g.num_nodes();
  const std::size_t budget =
      opts.max_iter != 0 ? opts.max_iter
                         : static_cast<std::size_t>(10.0 * std::sqrt(static_cast<double>(n))) + 200;
  const std::size_t max_basis = n - 1;  // dimension of the deflated space
  const double lnorm = std::max(1.0, 2.0 * static_cast<double>(g.max_degree()));
  const double breakdown = 1e-12 * lnorm;

  Rng rng(derive_seed(opts.seed, {n}));
  auto random_start = [&](std::span<double> v) {
    for (double& x : v) x = rng.normal();
  };

  std::vector<double> basis;  // column j at [j*n, (j+1)*n)
  basis.reserve(std::min(budget + 1, max_basis) * n);
  detail::Tridiagonal t;
  std::vector<double> w(n), coeffs;

  auto column = [&](std::size_t j) { return std::span<double>(basis.data() + j * n, n); };

  // Orthogonalize v against ones and the first `cols` basis vectors (twice).
  auto orthogonalize = [&](std::span<double> v, std::size_t cols) {
    for (int pass = 0; pass < 2; ++pass) {
      detail::remove_mean(v);
      coeffs.assign(cols, 0.0);
      for (std::size_t j = 0; j < cols; ++j) coeffs[j] = detail::dot(column(j), v);
      for (std::size_t j = 0; j < cols; ++j) {
        const double c = coeffs[j];
        const double* q = basis.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
      }
    }
  };

  // Appends a fresh unit vector orthogonal to everything so far; false when
  // none can be found (the basis spans the deflated space).
  auto push_random = [&]() {
    for (int attempt = 0; attempt < 4; ++attempt) {
      random_start(w);
      orthogonalize(w, basis.size() / n);
      const double nrm = detail::norm2(w);
      if (nrm > 1e-8 * std::sqrt(static_cast<double>(n))) {
        for (double& x : w) x /= nrm;
        basis.insert(basis.end(), w.begin(), w.end());
        return true;
      }
    }
    return false;
  };

  SpectralResult best;
  best.residual = std::numeric_limits<double>::infinity();

  auto finish = [&](std::size_t iterations) {
    const std::size_t k = t.size();
    const double theta = t.smallest_eigenvalue();
    const std::vector<double> s = t.eigenvector(theta);
    std::vector<double> y(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const double c = s[j];
      const double* q = basis.data() + j * n;
      for (std::size_t i = 0; i < n; ++i) y[i] += c * q[i];
    }
    detail::remove_mean(y);
    const double nrm = detail::norm2(y);
    for (double& v : y) v /= nrm;
    detail::canonical_sign(y);
    SpectralResult r;
    r.lambda2 = laplacian_quadform(g, y);
    r.residual = detail::residual_norm(g, y, r.lambda2);
    r.fiedler = std::move(y);
    r.iterations = iterations;
    if (r.residual < best.residual) best = r;
    return r;
  };

  push_random();
  double prev_beta = 0.0;
  for (std::size_t iter = 1; iter <= budget; ++iter) {
    const std::size_t j = basis.size() / n - 1;
    laplacian_apply(g, column(j), w);
    const double alpha = detail::dot(column(j), w);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] -= alpha * basis[j * n + i];
      if (j > 0) w[i] -= prev_beta * basis[(j - 1) * n + i];
    }
    orthogonalize(w, j + 1);
    const double beta = detail::norm2(w);

    t.diag.push_back(alpha);
    const double theta = t.smallest_eigenvalue();
    const double tol_abs = opts.tol * std::max(1.0, theta);
    const std::vector<double> s = t.eigenvector(theta);
    const double ritz_residual = beta * std::abs(s.back());
    const bool exhausted = j + 1 >= max_basis;

    if (ritz_residual <= 0.5 * tol_abs || exhausted) {
      SpectralResult r = finish(iter);
      if (r.residual <= opts.tol * std::max(1.0, r.lambda2)) return r;
      if (exhausted) break;
    }

    if (beta > breakdown) {
      t.off.push_back(beta);
      for (std::size_t i = 0; i < n; ++i) w[i] /= beta;
      basis.insert(basis.end(), w.begin(), w.end());
      prev_beta = beta;
    } else {
      // Invariant subspace found; continue the Krylov process in a fresh
      // direction. The zero coupling splits T into independent blocks.
      if (!push_random()) break;
      t.off.push_back(0.0);
      prev_beta = 0.0;
    }
  }

  if (best.fiedler.empty()) finish(budget);
  throw ConvergenceError("Lanczos did not reach residual tolerance on n=" + std::to_string(n) +
                             " (best residual " + std::to_string(best.residual) + ")",
                         best.residual);
}

/// Dense symmetric eigendecomposition by cyclic Jacobi rotations.
struct DenseEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column k at [k*n, (k+1)*n), matches values[k]
  std::size_t sweeps = 0;
};

/// `a` is a row-major symmetric n x n matrix; it is consumed.
inline DenseEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double frob = 0.0;
  for (double x : a) frob += x * x;
  const double target = frob * 1e-32;

  std::size_t sweep = 0;
  for (; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    }
    if (off <= target) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          at(p, q) = at(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double tn = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) tn = -tn;
        const double c = 1.0 / std::sqrt(tn * tn + 1.0);
        const double s = tn * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = at(p, k) = c * akp - s * akq;
          at(k, q) = at(q, k) = s * akp + c * akq;
        }
        at(p, p) = app - tn * apq;
        at(q, q) = aqq + tn * apq;
        at(p, q) = at(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return at(x, x) < at(y, y); });
  DenseEigen out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = at(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = v[i * n + order[k]];
  }
  return out;
}

inline constexpr std::size_t kDenseOracleMaxNodes = 2000;

inline std::vector<double> dense_laplacian(const SparseGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    l[i * n + i] = static_cast<double>(g.degree(i));
    for (NodeId j : g.neighbors(i)) l[i * n + j] = -1.0;
  }
  return l;
}

/// All Laplacian eigenvalues, ascending.
inline std::vector<double> dense_laplacian_spectrum(const SparseGraph& g) {
  if (g.num_nodes() > kDenseOracleMaxNodes) throw DataError("dense spectrum: graph too large");
  return jacobi_eigen(dense_laplacian(g), g.num_nodes()).values;
}

/// Same contract as fiedler(), computed densely. The ones direction is moved
/// above the spectrum by adding (shift/n) * 11^T, so the smallest eigenpair of
/// the shifted matrix is the Fiedler pair even when lambda2 = 0.
inline SpectralResult fiedler_dense_oracle(const SparseGraph& g) {
  const std::size_t n = g.num_nodes();
  if (n > kDenseOracleMaxNodes) {
    throw DataError("dense oracle limited to " + std::to_string(kDenseOracleMaxNodes) +
                    " nodes, got " + std::to_string(n));
  }
  std::vector<double> l = dense_laplacian(g);
  const double shift = (2.0 * static_cast<double>(g.max_degree()) + 1.0) / static_cast<double>(n);
  for (double& x : l) x += shift;
  DenseEigen eig = jacobi_eigen(std::move(l), n);

  std::vector<double> y(eig.vectors.begin(), eig.vectors.begin() + static_cast<std::ptrdiff_t>(n));
  detail::remove_mean(y);
  const double nrm = detail::norm2(y);
  for (double& x : y) x /= nrm;
  detail::canonical_sign(y);

  SpectralResult r;
  r.lambda2 = eig.values[0];
  r.residual = detail::residual_norm(g, y, r.lambda2);
  r.fiedler = std::move(y);
  r.iterations = eig.sweeps;
  return r;
}

}  // namespace specphase
