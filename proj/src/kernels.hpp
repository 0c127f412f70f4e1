#pragma once

// Single-vertex log-likelihood deltas shared by the public likelihood API and
// the sampler hot loop. X is column-major n x d (column c starts at X + c*n),
// y points at row i of the adjacency matrix.

#include "rdpg/types.hpp"

#include <algorithm>
#include <cmath>

namespace rdpg::detail {

using Index = Eigen::Index;

template <int D>
inline double dot_row(const double* X, Index n, Index j, const double* x, Index d) {
  if constexpr (D > 0) {
    double s = 0.0;
    for (int c = 0; c < D; ++c) s += X[c * n + j] * x[c];
    return s;
  } else {
    double s = 0.0;
    for (Index c = 0; c < d; ++c) s += X[c * n + j] * x[c];
    return s;
  }
}

// Sum over j in [lo, hi) of log(a_j / b_j) where a_j, b_j are the Bernoulli
// factors (q or 1-q, p or 1-p) under the proposed and current row. Products
// are accumulated over blocks so that one log covers many terms; blocks whose
// products get close to underflow are redone term by term.
template <int D>
double bernoulli_range(const double* X, Index n, Index d, const double* y, Index lo, Index hi,
                       const double* x_old, const double* x_new) {
  constexpr int kLanes = 8;
  constexpr Index kBlock = 64;
  constexpr double kTiny = 1e-280;
  double sum = 0.0;
  for (Index start = lo; start < hi; start += kBlock) {
    const Index end = std::min(hi, start + kBlock);
    double num[kLanes], den[kLanes];
    for (int l = 0; l < kLanes; ++l) num[l] = den[l] = 1.0;
    Index j = start;
    for (; j + kLanes <= end; j += kLanes) {
      for (int l = 0; l < kLanes; ++l) {
        const Index m = j + l;
        const double p = dot_row<D>(X, n, m, x_old, d);
        const double q = dot_row<D>(X, n, m, x_new, d);
        const double e = y[m];
        num[l] *= (1.0 - e) + (2.0 * e - 1.0) * q;
        den[l] *= (1.0 - e) + (2.0 * e - 1.0) * p;
      }
    }
    double N = 1.0, Dn = 1.0;
    for (int l = 0; l < kLanes; ++l) {
      N *= num[l];
      Dn *= den[l];
    }
    for (; j < end; ++j) {
      const double p = dot_row<D>(X, n, j, x_old, d);
      const double q = dot_row<D>(X, n, j, x_new, d);
      const double e = y[j];
      N *= (1.0 - e) + (2.0 * e - 1.0) * q;
      Dn *= (1.0 - e) + (2.0 * e - 1.0) * p;
    }
    if (N > kTiny && Dn > kTiny && std::isfinite(N) && std::isfinite(Dn)) {
      sum += std::log(N) - std::log(Dn);
      continue;
    }
    for (j = start; j < end; ++j) {
      const double p = dot_row<D>(X, n, j, x_old, d);
      const double q = dot_row<D>(X, n, j, x_new, d);
      const double a = y[j] != 0.0 ? q : 1.0 - q;
      const double b = y[j] != 0.0 ? p : 1.0 - p;
      if (a <= 0.0) return kLogZero;
      if (b <= 0.0) return std::numeric_limits<double>::infinity();
      sum += std::log(a) - std::log(b);
    }
  }
  return sum;
}

template <int D>
double bernoulli_row_delta_impl(const double* X, Index n, Index d, const double* y, Index i,
                                const double* x_old, const double* x_new, bool self_loops) {
  double delta = bernoulli_range<D>(X, n, d, y, 0, i, x_old, x_new);
  if (is_log_zero(delta)) return delta;
  delta += bernoulli_range<D>(X, n, d, y, i + 1, n, x_old, x_new);
  if (is_log_zero(delta)) return delta;
  if (self_loops) {
    double p = 0.0, q = 0.0;
    for (Index c = 0; c < d; ++c) {
      p += x_old[c] * x_old[c];
      q += x_new[c] * x_new[c];
    }
    const double a = y[i] != 0.0 ? q : 1.0 - q;
    const double b = y[i] != 0.0 ? p : 1.0 - p;
    if (a <= 0.0) return kLogZero;
    if (b <= 0.0) return std::numeric_limits<double>::infinity();
    delta += std::log(a) - std::log(b);
  }
  return delta;
}

/// loglik(X with row i = x_new) - loglik(X) for the Bernoulli likelihood.
/// x_old must equal row i of X. Returns kLogZero if the proposal is impossible
/// and +inf if only the current state is.
inline double bernoulli_row_delta(const double* X, Index n, Index d, const double* y, Index i,
                                  const double* x_old, const double* x_new, bool self_loops) {
  switch (d) {
    case 1: return bernoulli_row_delta_impl<1>(X, n, d, y, i, x_old, x_new, self_loops);
    case 2: return bernoulli_row_delta_impl<2>(X, n, d, y, i, x_old, x_new, self_loops);
    case 3: return bernoulli_row_delta_impl<3>(X, n, d, y, i, x_old, x_new, self_loops);
    case 4: return bernoulli_row_delta_impl<4>(X, n, d, y, i, x_old, x_new, self_loops);
    default: return bernoulli_row_delta_impl<0>(X, n, d, y, i, x_old, x_new, self_loops);
  }
}

template <int D>
double gaussian_range(const double* X, Index n, Index d, const double* y, Index lo, Index hi,
                      const double* x_old, const double* x_new) {
  double sum = 0.0;
  for (Index j = lo; j < hi; ++j) {
    const double p = dot_row<D>(X, n, j, x_old, d);
    const double q = dot_row<D>(X, n, j, x_new, d);
    sum += (p - q) * (2.0 * y[j] - p - q);
  }
  return sum;
}

template <int D>
double gaussian_row_delta_impl(const double* X, Index n, Index d, const double* y, Index i,
                               const double* x_old, const double* x_new, bool self_loops) {
  // (y - q)^2 - (y - p)^2 = (p - q)(2y - p - q). Ordered pairs (i, j) and
  // (j, i) both contribute for j != i; loglik is -1/2 of the total.
  const double off = gaussian_range<D>(X, n, d, y, 0, i, x_old, x_new) +
                     gaussian_range<D>(X, n, d, y, i + 1, n, x_old, x_new);
  double diag = 0.0;
  if (self_loops) {
    double p = 0.0, q = 0.0;
    for (Index c = 0; c < d; ++c) {
      p += x_old[c] * x_old[c];
      q += x_new[c] * x_new[c];
    }
    diag = (p - q) * (2.0 * y[i] - p - q);
  }
  return -0.5 * (2.0 * off + diag);
}

/// Same as bernoulli_row_delta for the Gaussian pseudo-likelihood over
/// ordered pairs.
inline double gaussian_row_delta(const double* X, Index n, Index d, const double* y, Index i,
                                 const double* x_old, const double* x_new, bool self_loops) {
  switch (d) {
    case 1: return gaussian_row_delta_impl<1>(X, n, d, y, i, x_old, x_new, self_loops);
    case 2: return gaussian_row_delta_impl<2>(X, n, d, y, i, x_old, x_new, self_loops);
    case 3: return gaussian_row_delta_impl<3>(X, n, d, y, i, x_old, x_new, self_loops);
    case 4: return gaussian_row_delta_impl<4>(X, n, d, y, i, x_old, x_new, self_loops);
    default: return gaussian_row_delta_impl<0>(X, n, d, y, i, x_old, x_new, self_loops);
  }
}

}  // namespace rdpg::detail
