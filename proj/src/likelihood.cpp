#include "rdpg/likelihood.hpp"

#include "kernels.hpp"

#include <cmath>

namespace rdpg {
namespace {

void check_shapes(const LatentMatrix& X, const AdjacencyMatrix& Y) {
  if (X.n() != Y.n()) throw std::invalid_argument("latent positions and adjacency matrix disagree on n");
}

void check_row(const LatentMatrix& X, Eigen::Index i, const Vector& x_new) {
  if (i < 0 || i >= X.n()) throw std::invalid_argument("vertex index out of range");
  if (x_new.size() != X.d()) throw std::invalid_argument("replacement row has the wrong dimension");
}

}  // namespace

PriorSpec PriorSpec::gaussian(double sigma) {
  PriorSpec spec{Kind::gaussian, sigma};
  spec.validate();
  return spec;
}

void PriorSpec::validate() const {
  if (kind == Kind::gaussian && !(sigma > 0.0)) throw std::invalid_argument("Gaussian prior needs sigma > 0");
}

double bernoulli_loglik(const LatentMatrix& X, const AdjacencyMatrix& Y) {
  check_shapes(X, Y);
  const Matrix P = X.gram();
  const Matrix& A = Y.values();
  const auto n = X.n();
  const Eigen::Index offset = Y.includes_self_loops() ? 0 : 1;
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i + offset <= j; ++i) {
      const double p = P(i, j);
      if (p < -kLatentTolerance || p > 1.0 + kLatentTolerance)
        throw std::invalid_argument("edge probability outside [0, 1]");
      const double prob = A(i, j) != 0.0 ? p : 1.0 - p;
      if (prob <= 0.0) return kLogZero;
      total += std::log(prob);
    }
  }
  return total;
}

double bernoulli_loglik_row_delta(const LatentMatrix& X, const AdjacencyMatrix& Y, Eigen::Index i,
                                  const Vector& x_new) {
  check_shapes(X, Y);
  check_row(X, i, x_new);
  if (!in_latent_space(x_new)) throw std::invalid_argument("replacement row is outside the latent space");
  const Vector x_old = X.values().row(i).transpose();
  return detail::bernoulli_row_delta(X.values().data(), X.n(), X.d(), Y.values().col(i).data(), i,
                                     x_old.data(), x_new.data(), Y.includes_self_loops());
}

double gaussian_pseudo_loglik(const LatentMatrix& X, const AdjacencyMatrix& Y) {
  check_shapes(X, Y);
  Matrix R = Y.values() - X.gram();
  if (!Y.includes_self_loops()) R.diagonal().setZero();
  return -0.5 * R.squaredNorm();
}

double gaussian_pseudo_loglik_row_delta(const LatentMatrix& X, const AdjacencyMatrix& Y, Eigen::Index i,
                                        const Vector& x_new) {
  check_shapes(X, Y);
  check_row(X, i, x_new);
  const Vector x_old = X.values().row(i).transpose();
  return detail::gaussian_row_delta(X.values().data(), X.n(), X.d(), Y.values().col(i).data(), i,
                                    x_old.data(), x_new.data(), Y.includes_self_loops());
}

double log_prior_row(const Vector& x, const PriorSpec& prior) {
  switch (prior.kind) {
    case PriorSpec::Kind::uniform_on_X:
      return in_latent_space(x, 0.0) ? 0.0 : kLogZero;
    case PriorSpec::Kind::gaussian:
      return -x.squaredNorm() / (2.0 * prior.sigma * prior.sigma);
  }
  return kLogZero;
}

double log_prior(const LatentMatrix& X, const PriorSpec& prior) {
  prior.validate();
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.n(); ++i) {
    const double v = log_prior_row(X.values().row(i).transpose(), prior);
    if (is_log_zero(v)) return kLogZero;
    total += v;
  }
  return total;
}

}  // namespace rdpg
