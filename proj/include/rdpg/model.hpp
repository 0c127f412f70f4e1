#pragma once

#include "rdpg/types.hpp"

#include <cstdint>
#include <utility>

namespace rdpg {

/// Draws y_ij ~ Bernoulli(x_i^T x_j) independently for i <= j and mirrors.
/// With self_loops = false only i < j is drawn and the diagonal stays 0.
AdjacencyMatrix sample_rdpg(const LatentMatrix& X, std::uint64_t seed, bool self_loops = true);

/// Block sizes are multinomial(n, proportions) unless spec.assignment is set.
/// Empty blocks are possible at small n and are kept as they are.
std::pair<LatentMatrix, ClusterAssignment> sbm_to_latent(const SbmSpec& spec, Eigen::Index n,
                                                         std::uint64_t seed);

/// L with L L^T = B, columns ordered by decreasing eigenvalue, one column per
/// numerically nonzero eigenvalue. Throws if B has an eigenvalue below -1e-8.
Matrix factorize_block_matrix(const Matrix& B);

/// C(t) = [t^2, (1-t)^2, 2t(1-t)].
Eigen::Vector3d hardy_weinberg_point(double t);

struct HardyWeinbergSample {
  LatentMatrix positions;
  std::vector<double> t;
};

/// n points on the Hardy-Weinberg curve with t_i ~ Unif(0, 1).
HardyWeinbergSample hardy_weinberg_latent(Eigen::Index n, std::uint64_t seed);

/// Clips negative coordinates to zero, then rescales rows with norm > 1.
LatentMatrix project_to_latent_space(const LatentMatrix& X);

/// Block positions of the built-in SBM setups (K = 3, 5 or 7), one row per block.
Matrix table1_block_positions(int K);

/// Default vertex count paired with each built-in SBM setup.
Eigen::Index table1_default_n(int K);

/// Uniform-proportion SBM for the built-in setup with K blocks.
SbmSpec table1_sbm(int K);

}  // namespace rdpg
