#pragma once

#include "rdpg/types.hpp"

namespace rdpg {

/// Prior on each row of X. The set is closed: Unif(X) for the posterior
/// spectral embedding, an isotropic Gaussian for the Gaussian one.
struct PriorSpec {
  enum class Kind { uniform_on_X, gaussian };
  Kind kind = Kind::uniform_on_X;
  double sigma = 10.0;

  static PriorSpec uniform() { return {Kind::uniform_on_X, 10.0}; }
  static PriorSpec gaussian(double sigma);

  void validate() const;
};

// All log-densities below omit normalizing constants; only differences are
// meaningful. Pairs range over i <= j, or i < j when Y has no self-loops.

/// sum_{i<=j} y_ij log p_ij + (1 - y_ij) log(1 - p_ij) with p = X X^T.
/// Returns kLogZero when some p_ij in {0, 1} contradicts y_ij. X need not be
/// constrained, but every p_ij must be a probability.
double bernoulli_loglik(const LatentMatrix& X, const AdjacencyMatrix& Y);

/// bernoulli_loglik with row i replaced by x_new, minus bernoulli_loglik.
/// Only the O(n d) terms touching vertex i are evaluated.
double bernoulli_loglik_row_delta(const LatentMatrix& X, const AdjacencyMatrix& Y, Eigen::Index i,
                                  const Vector& x_new);

/// -1/2 sum over ordered pairs (i, j) of (y_ij - x_i^T x_j)^2; off-diagonal
/// pairs count twice. The constant -n^2 log(2 pi) / 2 is dropped. For hollow
/// graphs the diagonal pairs are left out.
double gaussian_pseudo_loglik(const LatentMatrix& X, const AdjacencyMatrix& Y);

double gaussian_pseudo_loglik_row_delta(const LatentMatrix& X, const AdjacencyMatrix& Y, Eigen::Index i,
                                        const Vector& x_new);

/// Unif(X): 0 inside, kLogZero outside. Gaussian: -sum ||x_i||^2 / (2 sigma^2).
double log_prior(const LatentMatrix& X, const PriorSpec& prior);

/// Contribution of a single row to log_prior.
double log_prior_row(const Vector& x, const PriorSpec& prior);

}  // namespace rdpg
