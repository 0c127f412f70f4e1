#pragma once

#include "rdpg/types.hpp"

#include <span>

namespace rdpg {

/// Eigenvalues in non-increasing order with matching orthonormal columns.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

/// Top-m algebraically largest eigenpairs of a symmetric matrix.
/// Dense decomposition; intended for n up to a few thousand.
EigenPairs top_eigen(const Matrix& M, Eigen::Index m);

struct EmbeddingDiagnostics {
  // Number of top-d eigenvalues that were negative and clipped to zero.
  int clipped_eigenvalues = 0;
};

/// U S^{1/2} from the top-d eigenpairs of Y, negative eigenvalues clipped to 0.
/// Y may be any symmetric real matrix, e.g. P0 itself for noiseless checks.
LatentMatrix adjacency_spectral_embedding(const Matrix& Y, Eigen::Index d,
                                          EmbeddingDiagnostics* diagnostics = nullptr);
LatentMatrix adjacency_spectral_embedding(const AdjacencyMatrix& Y, Eigen::Index d,
                                          EmbeddingDiagnostics* diagnostics = nullptr);

/// Same readoff applied to an arbitrary symmetric matrix (e.g. a posterior
/// mean of X X^T).
LatentMatrix low_rank_factor(const Matrix& M, Eigen::Index d, EmbeddingDiagnostics* diagnostics = nullptr);

/// Singular values of a symmetric matrix (absolute eigenvalues), non-increasing.
Vector singular_values(const Matrix& M);

/// Elbow of a scree plot: the k in 1..min(max_rank, len - 1) maximizing
/// sigma_k - sigma_{k+1}, smallest k on ties. max_rank <= 0 means len / 2
/// (but at least 1).
int elbow_dimension(std::span<const double> singular_values, int max_rank = 0);
inline int elbow_dimension(const Vector& singular_values, int max_rank = 0) {
  return elbow_dimension(std::span<const double>(singular_values.data(), static_cast<std::size_t>(singular_values.size())),
                         max_rank);
}

}  // namespace rdpg
