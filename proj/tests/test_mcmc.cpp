#include "doctest.h"

#include "rdpg/align.hpp"
#include "rdpg/mcmc.hpp"
#include "rdpg/model.hpp"
#include "rdpg/oracle.hpp"
#include "rdpg/spectral.hpp"

#include <cmath>
#include <sstream>

using namespace rdpg;

namespace {

ChainConfig short_config(std::uint64_t seed, int iterations = 400, int burn_in = 100, int thin = 5) {
  ChainConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = burn_in;
  cfg.thin = thin;
  cfg.seed = seed;
  return cfg;
}

AdjacencyMatrix pair_graph(bool edge) {
  Matrix A = Matrix::Zero(2, 2);
  if (edge) A(0, 1) = A(1, 0) = 1.0;
  return {A, false};
}

AdjacencyMatrix small_sbm(Eigen::Index n, std::uint64_t seed, LatentMatrix* truth = nullptr) {
  auto [X, labels] = sbm_to_latent(table1_sbm(3), n, seed);
  if (truth) *truth = X;
  return sample_rdpg(X, seed + 1);
}

}  // namespace

TEST_CASE("chain configuration") {
  ChainConfig cfg;
  CHECK(cfg.retained_count() == 1000);
  cfg.iterations = 5000;
  CHECK(cfg.retained_count() == 0);
  CHECK_THROWS_WITH_AS(cfg.validate(), "no retained samples", std::invalid_argument);
  cfg = short_config(0, 10, 3, 3);
  CHECK(cfg.retained_count() == 2);
  cfg.thin = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = short_config(0);
  cfg.step_size = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("retained sample count matches the thinning arithmetic") {
  const auto Y = small_sbm(30, 3);
  for (auto [it, burn, thin] : {std::tuple{13, 3, 3}, std::tuple{20, 0, 1}, std::tuple{50, 10, 7}}) {
    const auto s = run_chain(Y, 2, PriorSpec::uniform(), short_config(1, it, burn, thin));
    CHECK(s.samples == (it - burn) / thin);
    CHECK(s.retained.size() == static_cast<std::size_t>(s.samples));
    CHECK(s.step_size_trace.size() == static_cast<std::size_t>(it));
  }
}

TEST_CASE("chain errors") {
  const auto Y = small_sbm(10, 1);
  CHECK_THROWS_AS(MetropolisChain(Y, 11, PriorSpec::uniform(), short_config(0)), std::invalid_argument);
  CHECK_THROWS_AS(MetropolisChain(Y, 0, PriorSpec::uniform(), short_config(0)), std::invalid_argument);
  CHECK_THROWS_AS(run_gse_chain(Y, 2, 0.0, short_config(0)), std::invalid_argument);
  CHECK_THROWS_AS(run_gse_chain(Y, 2, -1.0, short_config(0)), std::invalid_argument);

  // Zero positions rule out every observed edge.
  Matrix A = Matrix::Zero(2, 2);
  A(0, 1) = A(1, 0) = 1.0;
  CHECK_THROWS_AS(MetropolisChain(AdjacencyMatrix(A, true), 1, PriorSpec::uniform(), short_config(0),
                                  LatentMatrix::constrained(Matrix::Zero(2, 1))),
                  std::invalid_argument);
}

TEST_CASE("fixed seeds reproduce the chain exactly") {
  const auto Y = small_sbm(40, 5);
  const auto a = run_chain(Y, 2, PriorSpec::uniform(), short_config(9));
  const auto b = run_chain(Y, 2, PriorSpec::uniform(), short_config(9));
  CHECK(a.mean_P == b.mean_P);
  CHECK(a.final_state.values() == b.final_state.values());
  CHECK(a.retained_log_target == b.retained_log_target);
  CHECK(a.step_size_trace == b.step_size_trace);
  const auto c = run_chain(Y, 2, PriorSpec::uniform(), short_config(10));
  CHECK(a.mean_P != c.mean_P);
}

TEST_CASE("PSE samples stay in the latent space and log targets stay exact") {
  const auto Y = small_sbm(40, 7);
  ChainConfig cfg = short_config(2, 300, 50, 1);
  cfg.step_size = 0.3;
  MetropolisChain chain(Y, 2, PriorSpec::uniform(), cfg);
  while (!chain.finished()) {
    chain.sweep();
    const Matrix& X = chain.state();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      REQUIRE(X.row(i).minCoeff() >= 0.0);
      REQUIRE(X.row(i).squaredNorm() <= 1.0);
    }
    if (chain.iteration() % 50 == 0) {
      const double exact = bernoulli_loglik(LatentMatrix::constrained(X), Y);
      CHECK(std::abs(chain.log_target() - exact) <= 1e-8 * (1.0 + std::abs(exact)));
    }
  }
  const auto s = chain.summary();
  for (const auto& sample : s.retained) CHECK(sample.is_constrained());
  CHECK(s.acceptance_rate > 0.0);
  CHECK(s.acceptance_rate < 1.0);
}

TEST_CASE("posterior mean of the edge probabilities") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto Y = small_sbm(35, seed);
    const auto s = run_chain(Y, 2, PriorSpec::uniform(), short_config(seed));
    const Matrix& P = s.mean_P;
    CHECK((P - P.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(P.minCoeff() >= 0.0);
    CHECK(P.maxCoeff() <= 1.0);
    CHECK(top_eigen(P, P.rows()).values.minCoeff() >= -1e-8);
    CHECK_NOTHROW(s.edge_probabilities());
  }
}

TEST_CASE("step size adapts only during burn-in") {
  const auto Y = small_sbm(40, 11);
  const auto s = run_chain(Y, 2, PriorSpec::uniform(), short_config(4, 300, 150, 5));
  for (std::size_t t = 151; t < s.step_size_trace.size(); ++t) CHECK(s.step_size_trace[t] == s.step_size_trace[150]);
  CHECK(s.step_size_trace[0] == doctest::Approx(0.05));
  CHECK(s.step_size_trace[150] != s.step_size_trace[0]);

  ChainConfig fixed = short_config(4, 100, 50, 5);
  fixed.adapt = false;
  const auto f = run_chain(Y, 2, PriorSpec::uniform(), fixed);
  for (double v : f.step_size_trace) CHECK(v == f.step_size_trace[0]);
  CHECK(f.step_size_trace[0] == doctest::Approx(0.05));
}

TEST_CASE("checkpoint and resume reproduce an uninterrupted run") {
  const auto Y = small_sbm(30, 13);
  for (Target target : {Target::pse, Target::gse}) {
    ChainConfig cfg = short_config(21, 200, 60, 4);
    cfg.target = target;
    const PriorSpec prior = target == Target::pse ? PriorSpec::uniform() : PriorSpec::gaussian(10.0);

    MetropolisChain whole(Y, 2, prior, cfg);
    whole.run();

    for (int stop : {30, 60, 61, 150}) {
      MetropolisChain part(Y, 2, prior, cfg);
      for (int t = 0; t < stop; ++t) part.sweep();
      std::stringstream buffer;
      part.save_checkpoint(buffer);
      auto resumed = MetropolisChain::load_checkpoint(buffer, Y);
      CHECK(resumed.iteration() == stop);
      resumed.run();
      const auto a = whole.summary();
      const auto b = resumed.summary();
      CHECK(a.mean_P == b.mean_P);
      CHECK(a.final_state.values() == b.final_state.values());
      CHECK(a.retained_log_target == b.retained_log_target);
      CHECK(a.step_size_trace == b.step_size_trace);
      CHECK(a.acceptance_rate == b.acceptance_rate);
    }
  }
}

TEST_CASE("checkpoints refuse a different graph") {
  const auto Y = small_sbm(20, 1);
  const auto Z = small_sbm(20, 2);
  MetropolisChain chain(Y, 2, PriorSpec::uniform(), short_config(0));
  chain.sweep();
  std::stringstream buffer;
  chain.save_checkpoint(buffer);
  CHECK_THROWS_AS(MetropolisChain::load_checkpoint(buffer, Z), std::runtime_error);
  std::stringstream garbage("not a checkpoint");
  CHECK_THROWS_AS(MetropolisChain::load_checkpoint(garbage, Y), std::runtime_error);
}

TEST_CASE("two-vertex posterior matches the quadrature oracle") {
  ChainConfig cfg = short_config(17, 50000, 2000, 1);
  cfg.step_size = 0.3;
  for (bool edge : {true, false}) {
    const auto Y = pair_graph(edge);
    const auto s = run_chain(Y, 1, PriorSpec::uniform(), cfg);
    const auto oracle = grid_posterior_moments(Y);
    const double expected = edge ? 4.0 / 9.0 : 5.0 / 27.0;
    CHECK(oracle.mean_xx(0, 1) == doctest::Approx(expected).epsilon(1e-4));
    CHECK(std::abs(s.mean_P(0, 1) - expected) <= 0.02);
  }
}

TEST_CASE("three-vertex path posterior matches the quadrature oracle") {
  Matrix A = Matrix::Zero(3, 3);
  A(0, 1) = A(1, 0) = 1.0;
  A(1, 2) = A(2, 1) = 1.0;
  for (bool loops : {false, true}) {
    Matrix B = A;
    if (loops) B(1, 1) = 1.0;
    const AdjacencyMatrix Y(B, loops);
    ChainConfig cfg = short_config(29, 60000, 2000, 2);
    cfg.step_size = 0.3;
    const auto s = run_chain(Y, 1, PriorSpec::uniform(), cfg);
    const auto oracle = grid_posterior_moments(Y);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) CHECK(std::abs(s.mean_P(i, j) - oracle.mean_xx(i, j)) <= 0.02);
  }
}

TEST_CASE("point estimator") {
  PosteriorSummary s;
  s.mean_P = Matrix::Zero(2, 2);
  s.mean_P.diagonal() << 4.0, 1.0;
  const Matrix x = point_estimator(s, 1).values();
  CHECK(std::abs(x(0, 0)) == doctest::Approx(2.0));
  CHECK(x(1, 0) == 0.0);
  CHECK_THROWS_AS(point_estimator(s, 3), std::invalid_argument);

  auto [X0, labels] = sbm_to_latent(table1_sbm(3), 50, 3);
  s.mean_P = X0.gram();
  CHECK(procrustes(point_estimator(s, 2), X0).loss <= 1e-10);
}

TEST_CASE("Gaussian chain tracks the spectral embedding for a flat prior") {
  const auto Y = small_sbm(100, 31);
  const Matrix ase = adjacency_spectral_embedding(Y, 2).values();
  const double ase_residual = (Y.values() - ase * ase.transpose()).norm();

  ChainConfig cfg = short_config(8, 3000, 1000, 10);
  const auto s = run_gse_chain(Y, 2, 1e6, cfg);
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.retained.size(); ++k)
    if (s.retained_log_target[k] > s.retained_log_target[best]) best = k;
  const Matrix X = s.retained[best].values();
  const double residual = (Y.values() - X * X.transpose()).norm();
  CHECK(residual >= ase_residual * (1.0 - 1e-9));
  CHECK(residual <= 1.05 * ase_residual);
  CHECK_FALSE(s.final_state.is_constrained());
}
