#include "rdpg/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace rdpg {

EigenPairs top_eigen(const Matrix& M, Eigen::Index m) {
  const auto n = M.rows();
  if (n == 0 || M.cols() != n) throw std::invalid_argument("top_eigen requires a square matrix");
  if (m < 1 || m > n) throw std::invalid_argument("top_eigen requires 1 <= m <= n");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("top_eigen requires a symmetric matrix");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

  // Eigen returns ascending order.
  EigenPairs out;
  out.values.resize(m);
  out.vectors.resize(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    out.values(c) = eig.eigenvalues()(n - 1 - c);
    out.vectors.col(c) = eig.eigenvectors().col(n - 1 - c);
  }
  return out;
}

LatentMatrix low_rank_factor(const Matrix& M, Eigen::Index d, EmbeddingDiagnostics* diagnostics) {
  if (d < 1 || d > M.rows()) throw std::invalid_argument("embedding dimension must satisfy 1 <= d <= n");
  const EigenPairs pairs = top_eigen(M, d);
  int clipped = 0;
  Matrix X = pairs.vectors;
  for (Eigen::Index c = 0; c < d; ++c) {
    double lambda = pairs.values(c);
    if (lambda < 0.0) {
      lambda = 0.0;
      ++clipped;
    }
    X.col(c) *= std::sqrt(lambda);
  }
  if (diagnostics) diagnostics->clipped_eigenvalues = clipped;
  return LatentMatrix::unconstrained(std::move(X));
}

LatentMatrix adjacency_spectral_embedding(const Matrix& Y, Eigen::Index d, EmbeddingDiagnostics* diagnostics) {
  if (d > Y.rows()) throw std::invalid_argument("embedding dimension exceeds vertex count");
  return low_rank_factor(Y, d, diagnostics);
}

LatentMatrix adjacency_spectral_embedding(const AdjacencyMatrix& Y, Eigen::Index d,
                                          EmbeddingDiagnostics* diagnostics) {
  return adjacency_spectral_embedding(Y.values(), d, diagnostics);
}

Vector singular_values(const Matrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("singular_values expects a square symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Vector s = eig.eigenvalues().cwiseAbs();
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

int elbow_dimension(std::span<const double> values, int max_rank) {
  const auto len = static_cast<int>(values.size());
  if (len < 2) throw std::invalid_argument("elbow_dimension needs at least two values");
  for (int k = 1; k < len; ++k) {
    if (values[k] > values[k - 1]) throw std::invalid_argument("singular values must be non-increasing");
  }
  if (max_rank <= 0) max_rank = std::max(1, len / 2);
  const int last = std::min(max_rank, len - 1);
  int best = 1;
  double best_gap = values[0] - values[1];
  for (int k = 2; k <= last; ++k) {
    const double gap = values[k - 1] - values[k];
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

}  // namespace rdpg
