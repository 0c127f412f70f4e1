#pragma once

#include "rdpg/likelihood.hpp"
#include "rdpg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace rdpg {

/// pse: Bernoulli likelihood, rows restricted to X.
/// gse: Gaussian pseudo-likelihood over ordered pairs, rows unrestricted.
enum class Target { pse, gse };

struct ChainConfig {
  int iterations = 15000;  // sweeps, burn-in included
  int burn_in = 5000;
  int thin = 10;
  double step_size = 0.05;  // initial random-walk scale
  std::uint64_t seed = 0;
  bool adapt = true;  // Robbins-Monro on log step size, burn-in only
  double target_acceptance = 0.234;
  Target target = Target::pse;
  int max_retained = -1;  // stored samples; -1 keeps all, mean_P is always exact

  int retained_count() const;
  /// Throws std::invalid_argument, including when no sample would be retained.
  void validate() const;
};

struct PosteriorSummary {
  Matrix mean_P;  // average of X X^T over retained samples
  int samples = 0;
  std::vector<LatentMatrix> retained;
  std::vector<double> retained_log_target;  // log likelihood + log prior, constants dropped
  double acceptance_rate = 0.0;  // post burn-in
  Vector per_vertex_acceptance;  // post burn-in
  std::vector<double> step_size_trace;  // one entry per sweep
  LatentMatrix final_state;

  /// mean_P as a validated probability matrix (always valid for pse chains).
  EdgeProbMatrix edge_probabilities() const { return EdgeProbMatrix(mean_P); }
};

/// Metropolis-Hastings over latent positions, one Gaussian random-walk
/// proposal per vertex per sweep, vertices visited in order.
///
/// The chain keeps a pointer to Y, which must outlive it. One chain owns its
/// RNG and is not thread-safe; distinct chains may share Y.
class MetropolisChain {
 public:
  /// Without init the chain starts at the adjacency spectral embedding,
  /// projected into X (and nudged off its boundary) for pse.
  MetropolisChain(const AdjacencyMatrix& Y, Eigen::Index d, PriorSpec prior, ChainConfig config,
                  std::optional<LatentMatrix> init = std::nullopt);

  void sweep();
  void run();
  bool finished() const { return iteration_ >= config_.iterations; }

  int iteration() const { return iteration_; }
  double step_size() const;
  const Matrix& state() const { return X_; }
  double log_target() const { return log_target_; }
  const ChainConfig& config() const { return config_; }
  const PriorSpec& prior() const { return prior_; }

  PosteriorSummary summary() const;

  /// Versioned text dump of config, state, accumulators and RNG. Restoring
  /// and continuing reproduces an uninterrupted run bit for bit.
  void save_checkpoint(std::ostream& out) const;
  static MetropolisChain load_checkpoint(std::istream& in, const AdjacencyMatrix& Y);

 private:
  MetropolisChain() = default;
  double full_log_target() const;
  double propose_delta(Eigen::Index i, const double* x_old, const double* x_new) const;
  void retain();

  const AdjacencyMatrix* Y_ = nullptr;
  PriorSpec prior_;
  ChainConfig config_;
  Matrix X_;
  double log_step_ = 0.0;
  double log_target_ = 0.0;
  int iteration_ = 0;

  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};

  std::int64_t accepted_ = 0;
  std::int64_t proposed_ = 0;
  std::vector<std::int64_t> vertex_accepted_;
  std::vector<double> step_trace_;

  Matrix sum_P_;  // lower triangle only
  int samples_ = 0;
  std::vector<Matrix> retained_;
  std::vector<double> retained_log_target_;
};

PosteriorSummary run_chain(const AdjacencyMatrix& Y, Eigen::Index d, const PriorSpec& prior,
                           const ChainConfig& config, std::optional<LatentMatrix> init = std::nullopt);

/// Gaussian spectral embedding: gse target with the Gaussian prior N(0, sigma^2 I).
PosteriorSummary run_gse_chain(const AdjacencyMatrix& Y, Eigen::Index d, double sigma, ChainConfig config);

/// U S^{1/2} from the top-d eigenpairs of the posterior mean of X X^T.
LatentMatrix point_estimator(const PosteriorSummary& summary, Eigen::Index d);

}  // namespace rdpg
