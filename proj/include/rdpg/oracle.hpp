#pragma once

#include "rdpg/likelihood.hpp"
#include "rdpg/types.hpp"

namespace rdpg {

/// Midpoint grid over [0, 1] per latent coordinate.
struct GridSpec {
  int points_per_dim = 0;  // 0 picks 400 for n d <= 2 and 60 for n d = 3
  static constexpr double kMaxCells = 1e8;
};

struct GridMoments {
  Vector mean_x;   // E[x_i | Y]
  Matrix mean_xx;  // E[x_i x_j | Y], diagonal included
};

/// Posterior moments of a d = 1 RDPG with n <= 3 vertices under Unif([0, 1])
/// by midpoint quadrature of the exact Bernoulli likelihood. Cells where the
/// likelihood vanishes contribute nothing. Used as ground truth for sampler
/// tests; shares no code with the sampler.
GridMoments grid_posterior_moments(const AdjacencyMatrix& Y, const PriorSpec& prior = PriorSpec::uniform(),
                                   GridSpec grid = {});

}  // namespace rdpg
