#pragma once

#include "rdpg/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rdpg {

struct KMeansOptions {
  int restarts = 20;
  int max_iterations = 300;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct KMeansResult {
  ClusterAssignment assignment;
  double objective = 0.0;  // within-cluster sum of squares
  int iterations = 0;
  int best_restart = 0;
  std::vector<double> objective_trace;  // best restart, one value per assignment step
};

/// Lloyd's algorithm from k-means++ seeding; keeps the restart with the lowest
/// objective (ties go to the lower restart index). Heuristic: the global
/// optimum is not guaranteed.
KMeansResult kmeans(const Matrix& X, int K, const KMeansOptions& options = {});

/// Within-cluster sum of squares of a labelling (labels in 1..K) against its
/// cluster means.
double kmeans_objective(const Matrix& X, std::span<const int> labels, int K);

/// Pair-counting agreement 2(a + b) / (n(n - 1)). Labels are arbitrary ints.
double rand_index(std::span<const int> a, std::span<const int> b);

/// min over relabelings sigma of #{i : sigma(a_i) != b_i}. Labels in 1..K with
/// K <= 8; K = 0 infers it from the largest label.
int min_permutation_hamming(std::span<const int> a, std::span<const int> b, int K = 0);

}  // namespace rdpg
