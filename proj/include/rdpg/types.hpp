#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdpg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Distinguished value for log 0: impossible observations, points outside the
// prior support. MH treats it as automatic rejection.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_zero(double v) { return v == kLogZero; }

// Slack used when checking membership in the latent space
// X = {x : ||x||_2 <= 1, x >= 0}.
inline constexpr double kLatentTolerance = 1e-12;

/// True when the vector lies in X (up to kLatentTolerance).
template <class Derived>
bool in_latent_space(const Eigen::MatrixBase<Derived>& x, double tol = kLatentTolerance) {
  if (x.size() == 0) return true;
  if (x.minCoeff() < -tol) return false;
  return x.norm() <= 1.0 + tol;
}

/// n x d latent positions, one vertex per row.
///
/// A constrained matrix has every row in X; the constructor enforces this.
/// Unconstrained matrices carry estimates (ASE, GSE) that may leave X.
class LatentMatrix {
 public:
  LatentMatrix() = default;
  LatentMatrix(Matrix values, bool constrained);

  static LatentMatrix constrained(Matrix values) { return {std::move(values), true}; }
  static LatentMatrix unconstrained(Matrix values) { return {std::move(values), false}; }

  const Matrix& values() const { return values_; }
  bool is_constrained() const { return constrained_; }
  Eigen::Index n() const { return values_.rows(); }
  Eigen::Index d() const { return values_.cols(); }

  /// X X^T.
  Matrix gram() const;

 private:
  Matrix values_;
  bool constrained_ = false;
};

/// Symmetric 0/1 matrix of an observed undirected graph.
///
/// When includes_self_loops is false ("hollow" graph) the diagonal is zero
/// and every likelihood restricts to pairs i < j.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  AdjacencyMatrix(Matrix values, bool includes_self_loops);

  const Matrix& values() const { return values_; }
  bool includes_self_loops() const { return self_loops_; }
  Eigen::Index n() const { return values_.rows(); }
  bool edge(Eigen::Index i, Eigen::Index j) const { return values_(i, j) != 0.0; }
  std::int64_t edge_count() const;

 private:
  Matrix values_;
  bool self_loops_ = true;
};

/// Symmetric matrix of edge probabilities, entries in [0, 1].
class EdgeProbMatrix {
 public:
  EdgeProbMatrix() = default;
  explicit EdgeProbMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  Eigen::Index n() const { return values_.rows(); }

 private:
  Matrix values_;
};

/// Stochastic block model in RDPG form: block k has latent position
/// block_positions.row(k).
struct SbmSpec {
  Matrix block_positions;                 // K x d, rows in X
  std::vector<double> proportions;        // length K, sums to 1
  std::optional<std::vector<int>> assignment;  // explicit tau, labels in 1..K

  Eigen::Index K() const { return block_positions.rows(); }
  Eigen::Index d() const { return block_positions.cols(); }
  Matrix block_matrix() const { return block_positions * block_positions.transpose(); }

  /// Throws std::invalid_argument if any invariant fails.
  void validate() const;
};

/// Labels are 1-based block ids; centroids has one row per label.
struct ClusterAssignment {
  std::vector<int> labels;
  Matrix centroids;
  int K = 0;
};

}  // namespace rdpg
