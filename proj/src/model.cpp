#include "rdpg/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace rdpg {

LatentMatrix::LatentMatrix(Matrix values, bool constrained)
    : values_(std::move(values)), constrained_(constrained) {
  if (values_.rows() < 1 || values_.cols() < 1)
    throw std::invalid_argument("latent matrix must have n >= 1 and d >= 1");
  if (values_.cols() > values_.rows())
    throw std::invalid_argument("latent matrix must have d <= n");
  if (!values_.allFinite()) throw std::invalid_argument("latent matrix has non-finite entries");
  if (constrained_) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      if (!in_latent_space(values_.row(i)))
        throw std::invalid_argument("row " + std::to_string(i) + " is outside the latent space");
    }
  }
}

Matrix LatentMatrix::gram() const { return values_ * values_.transpose(); }

AdjacencyMatrix::AdjacencyMatrix(Matrix values, bool includes_self_loops)
    : values_(std::move(values)), self_loops_(includes_self_loops) {
  const auto n = values_.rows();
  if (n < 1 || values_.cols() != n) throw std::invalid_argument("adjacency matrix must be square");
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = values_(i, j);
      if (v != 0.0 && v != 1.0) throw std::invalid_argument("adjacency matrix must be binary");
      if (v != values_(j, i)) throw std::invalid_argument("adjacency matrix must be symmetric");
    }
  }
  if (!self_loops_ && values_.diagonal().any())
    throw std::invalid_argument("hollow adjacency matrix has a nonzero diagonal");
}

std::int64_t AdjacencyMatrix::edge_count() const {
  const auto n = values_.rows();
  std::int64_t count = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) count += values_(i, j) != 0.0;
  return count;
}

EdgeProbMatrix::EdgeProbMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) throw std::invalid_argument("edge probability matrix must be square");
  if ((values_ - values_.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("edge probability matrix must be symmetric");
  if (values_.minCoeff() < -1e-10 || values_.maxCoeff() > 1.0 + 1e-10)
    throw std::invalid_argument("edge probabilities must lie in [0, 1]");
}

void SbmSpec::validate() const {
  const auto k = K();
  if (k < 1 || d() < 1) throw std::invalid_argument("SBM needs at least one block and d >= 1");
  for (Eigen::Index r = 0; r < k; ++r) {
    if (!in_latent_space(block_positions.row(r)))
      throw std::invalid_argument("block position " + std::to_string(r + 1) + " is outside the latent space");
  }
  const Matrix B = block_matrix();
  if (B.minCoeff() < 0.0 || B.maxCoeff() > 1.0 + kLatentTolerance)
    throw std::invalid_argument("block matrix entries must lie in [0, 1]");
  if (assignment) {
    for (int label : *assignment) {
      if (label < 1 || label > k) throw std::invalid_argument("assignment label out of range");
    }
    return;
  }
  if (static_cast<Eigen::Index>(proportions.size()) != k)
    throw std::invalid_argument("proportions must have one entry per block");
  double total = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0)) throw std::invalid_argument("proportions must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("proportions must sum to 1");
}

AdjacencyMatrix sample_rdpg(const LatentMatrix& X, std::uint64_t seed, bool self_loops) {
  if (!X.is_constrained()) throw std::invalid_argument("sample_rdpg requires constrained latent positions");
  const auto n = X.n();
  const Matrix P = X.gram();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix Y = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      if (i == j && !self_loops) continue;
      if (unif(rng) < P(i, j)) {
        Y(i, j) = 1.0;
        Y(j, i) = 1.0;
      }
    }
  }
  return {std::move(Y), self_loops};
}

std::pair<LatentMatrix, ClusterAssignment> sbm_to_latent(const SbmSpec& spec, Eigen::Index n,
                                                         std::uint64_t seed) {
  spec.validate();
  const auto K = spec.K();
  std::vector<int> labels;
  if (spec.assignment) {
    labels = *spec.assignment;
    n = static_cast<Eigen::Index>(labels.size());
  } else {
    if (n < K) throw std::invalid_argument("sbm_to_latent requires n >= K");
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> block(spec.proportions.begin(), spec.proportions.end());
    labels.resize(static_cast<std::size_t>(n));
    for (auto& label : labels) label = block(rng) + 1;
  }
  if (n < 1) throw std::invalid_argument("SBM needs at least one vertex");

  Matrix X(n, spec.d());
  for (Eigen::Index i = 0; i < n; ++i) X.row(i) = spec.block_positions.row(labels[i] - 1);

  ClusterAssignment truth;
  truth.labels = std::move(labels);
  truth.centroids = spec.block_positions;
  truth.K = static_cast<int>(K);
  return {LatentMatrix(std::move(X), true), std::move(truth)};
}

Matrix factorize_block_matrix(const Matrix& B) {
  if (B.rows() != B.cols() || B.rows() == 0) throw std::invalid_argument("block matrix must be square");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("block matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(B);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Vector& values = eig.eigenvalues();  // ascending
  if (values.minCoeff() < -1e-8) throw std::invalid_argument("block matrix is not positive semidefinite");

  const double tol = 1e-10 * std::max(1.0, values.cwiseAbs().maxCoeff());
  const auto K = B.rows();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < K; ++k) rank += values(k) > tol;
  if (rank == 0) return Matrix::Zero(K, 1);

  Matrix L(K, rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    const Eigen::Index src = K - 1 - c;
    L.col(c) = eig.eigenvectors().col(src) * std::sqrt(values(src));
  }
  return L;
}

Eigen::Vector3d hardy_weinberg_point(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("Hardy-Weinberg parameter must lie in [0, 1]");
  return {t * t, (1.0 - t) * (1.0 - t), 2.0 * t * (1.0 - t)};
}

HardyWeinbergSample hardy_weinberg_latent(Eigen::Index n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("Hardy-Weinberg sample needs n >= 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  HardyWeinbergSample out;
  out.t.resize(static_cast<std::size_t>(n));
  Matrix X(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.t[i] = unif(rng);
    X.row(i) = hardy_weinberg_point(out.t[i]).transpose();
  }
  out.positions = LatentMatrix(std::move(X), true);
  return out;
}

LatentMatrix project_to_latent_space(const LatentMatrix& X) {
  Matrix out = X.values().cwiseMax(0.0);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 1.0) out.row(i) /= norm;
  }
  // Division can leave the norm a few ulps above 1.
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    while (out.row(i).squaredNorm() > 1.0) out.row(i) *= 1.0 - 1e-16;
  }
  return LatentMatrix(std::move(out), true);
}

Matrix table1_block_positions(int K) {
  Matrix positions;
  switch (K) {
    case 3:
      positions.resize(3, 2);
      positions << 0.3, 0.3,
                   0.3, 0.6,
                   0.6, 0.3;
      break;
    case 5:
      positions.resize(5, 2);
      positions << 0.3, 0.3,
                   0.3, 0.7,
                   0.7, 0.3,
                   0.7, 0.7,
                   0.5, 0.5;
      break;
    case 7:
      positions.resize(7, 2);
      positions << 0.2, 0.2,
                   0.2, 0.5,
                   0.2, 0.7,
                   0.5, 0.2,
                   0.5, 0.5,
                   0.5, 0.7,
                   0.7, 0.2;
      break;
    default:
      throw std::invalid_argument("built-in SBM setups exist for K = 3, 5, 7");
  }
  return positions;
}

Eigen::Index table1_default_n(int K) {
  switch (K) {
    case 3: return 600;
    case 5: return 1000;
    case 7: return 1400;
    default: throw std::invalid_argument("built-in SBM setups exist for K = 3, 5, 7");
  }
}

SbmSpec table1_sbm(int K) {
  SbmSpec spec;
  spec.block_positions = table1_block_positions(K);
  spec.proportions.assign(static_cast<std::size_t>(K), 1.0 / K);
  return spec;
}

}  // namespace rdpg
