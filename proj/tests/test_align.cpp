#include "doctest.h"

#include "rdpg/align.hpp"

#include <cmath>
#include <random>

using namespace rdpg;

namespace {

Matrix random_rotation(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix G(d, d);
  for (auto& v : G.reshaped()) v = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  // Sign fix so Q is Haar distributed.
  const Vector signs = qr.matrixQR().diagonal().array().sign();
  return Q * signs.asDiagonal();
}

Matrix random_matrix(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix M(n, d);
  for (auto& v : M.reshaped()) v = normal(rng);
  return M;
}

double loss_with(const Matrix& X_hat, const Matrix& X0, const Matrix& W) {
  return (X_hat - X0 * W).squaredNorm() / static_cast<double>(X_hat.rows());
}

}  // namespace

TEST_CASE("Procrustes examples") {
  SUBCASE("identical inputs") {
    Matrix X(3, 2);
    X << 1, 0, 0, 1, 1, 1;
    const auto r = procrustes(X, X);
    CHECK((r.rotation - Matrix::Identity(2, 2)).norm() <= 1e-12);
    CHECK(r.loss <= 1e-24);
  }
  SUBCASE("rotated copy") {
    std::mt19937_64 rng(1);
    const Matrix X0 = random_matrix(20, 3, rng);
    const Matrix W = random_rotation(3, rng);
    const auto r = procrustes(X0 * W, X0);
    CHECK(r.loss <= 1e-12);
    CHECK((r.rotation - W).norm() <= 1e-8);
  }
  SUBCASE("sign flip in one dimension") {
    Matrix X0(2, 1), X_hat(2, 1);
    X0 << 1, 0;
    X_hat << 0, 1;
    CHECK(procrustes(X_hat, X0).loss == doctest::Approx(1.0));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(procrustes(Matrix::Zero(3, 2), Matrix::Zero(4, 2)), std::invalid_argument);
    CHECK_THROWS_AS(procrustes(Matrix::Zero(3, 2), Matrix::Zero(3, 1)), std::invalid_argument);
  }
}

TEST_CASE("Procrustes rotation is orthogonal and beats random rotations") {
  std::mt19937_64 rng(2);
  for (int pair = 0; pair < 20; ++pair) {
    const Eigen::Index d = 1 + pair % 4;
    const Matrix X0 = random_matrix(15, d, rng);
    const Matrix X_hat = random_matrix(15, d, rng);
    const auto r = procrustes(X_hat, X0);
    CHECK((r.rotation.transpose() * r.rotation - Matrix::Identity(d, d)).norm() <= 1e-10);
    CHECK(std::abs(r.loss - loss_with(X_hat, X0, r.rotation)) <= 1e-12 * (1.0 + r.loss));
    for (int trial = 0; trial < 200; ++trial)
      CHECK(loss_with(X_hat, X0, random_rotation(d, rng)) - r.loss >= -1e-9);
  }
}

TEST_CASE("Procrustes loss is symmetric and rotation invariant") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix A = random_matrix(10, 2, rng);
    const Matrix B = random_matrix(10, 2, rng);
    const double ab = procrustes(A, B).loss;
    CHECK(ab == doctest::Approx(procrustes(B, A).loss).epsilon(1e-10));
    CHECK(ab == doctest::Approx(procrustes(A * random_rotation(2, rng), B).loss).epsilon(1e-10));
    CHECK(ab == doctest::Approx(procrustes(A, B * random_rotation(2, rng)).loss).epsilon(1e-10));
  }
}

TEST_CASE("edge probability error") {
  Matrix X(2, 1), Z = Matrix::Zero(2, 1);
  X << 1, 1;
  // ||ones(2,2)||_F / 2 = 1
  CHECK(edge_prob_error(X, Z) == doctest::Approx(1.0));
  Matrix half = Matrix::Constant(2, 1, std::sqrt(0.5));
  // ||0.5 ones(2,2) - ones(2,2)||_F / 2 = 0.5
  CHECK(edge_prob_error(half, X) == doctest::Approx(0.5));
  Matrix Y = Matrix::Zero(2, 2);
  Y(0, 0) = 1.0;
  Matrix W(2, 1);
  W << 1, 0;
  CHECK(edge_prob_error(Y, W) == doctest::Approx(0.0));

  std::mt19937_64 rng(4);
  const Matrix A = random_matrix(12, 3, rng);
  CHECK(edge_prob_error(A * random_rotation(3, rng), A) <= 1e-12);
  CHECK_THROWS_AS(edge_prob_error(Matrix::Zero(3, 2), Matrix::Zero(4, 2)), std::invalid_argument);
}
