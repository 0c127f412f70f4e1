#include "rdpg/align.hpp"

#include <Eigen/SVD>

namespace rdpg {

AlignmentResult procrustes(const Matrix& X_hat, const Matrix& X0) {
  if (X_hat.rows() != X0.rows() || X_hat.cols() != X0.cols())
    throw std::invalid_argument("procrustes requires matrices of the same shape");
  if (X_hat.rows() == 0) throw std::invalid_argument("procrustes requires at least one row");

  // max_W tr(W^T X0^T X_hat) is attained at W = U V^T for X0^T X_hat = U S V^T.
  const Matrix cross = X0.transpose() * X_hat;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  AlignmentResult out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  out.loss = (X_hat - X0 * out.rotation).squaredNorm() / static_cast<double>(X_hat.rows());
  return out;
}

AlignmentResult procrustes(const LatentMatrix& X_hat, const LatentMatrix& X0) {
  return procrustes(X_hat.values(), X0.values());
}

double edge_prob_error(const Matrix& X_hat, const Matrix& X0) {
  if (X_hat.rows() != X0.rows()) throw std::invalid_argument("edge_prob_error requires equal vertex counts");
  const Matrix diff = X_hat * X_hat.transpose() - X0 * X0.transpose();
  return diff.norm() / static_cast<double>(X_hat.rows());
}

double edge_prob_error(const LatentMatrix& X_hat, const LatentMatrix& X0) {
  return edge_prob_error(X_hat.values(), X0.values());
}

}  // namespace rdpg
