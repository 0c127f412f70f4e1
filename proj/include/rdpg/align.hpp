#pragma once

#include "rdpg/types.hpp"

namespace rdpg {

struct AlignmentResult {
  Matrix rotation;  // d x d orthogonal W
  double loss = 0.0;  // (1/n) ||X_hat - X0 W||_F^2
};

/// Orthogonal Procrustes: W minimizing ||X_hat - X0 W||_F, from the SVD of
/// X0^T X_hat. When X0^T X_hat is rank deficient the minimizer is not unique
/// and the solver's deterministic choice is returned.
AlignmentResult procrustes(const Matrix& X_hat, const Matrix& X0);
AlignmentResult procrustes(const LatentMatrix& X_hat, const LatentMatrix& X0);

/// (1/n) ||X_hat X_hat^T - X0 X0^T||_F; the embedding dimensions may differ.
double edge_prob_error(const Matrix& X_hat, const Matrix& X0);
double edge_prob_error(const LatentMatrix& X_hat, const LatentMatrix& X0);

}  // namespace rdpg
