#include "rdpg/cluster.hpp"

#include "rdpg/parallel.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace rdpg {
namespace {

struct LloydRun {
  std::vector<int> labels;  // 0-based
  Matrix centroids;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> trace;
};

Matrix seed_centroids(const Matrix& X, int K, std::mt19937_64& rng) {
  const auto n = X.rows();
  Matrix centroids(K, X.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centroids.row(0) = X.row(pick(rng));
  Vector best = (X.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 1; c < K; ++c) {
    const double total = best.sum();
    Eigen::Index chosen = 0;
    if (total <= 0.0) {
      chosen = pick(rng);
    } else {
      const double target = unif(rng) * total;
      double cumulative = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += best(i);
        if (target < cumulative) {
          chosen = i;
          break;
        }
      }
    }
    centroids.row(c) = X.row(chosen);
    best = best.cwiseMin((X.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

double assign(const Matrix& X, const Matrix& centroids, std::vector<int>& labels, Vector& dist) {
  double objective = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double dd = (X.row(i) - centroids.row(c)).squaredNorm();
      if (dd < best_d) {
        best_d = dd;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    dist(i) = best_d;
    objective += best_d;
  }
  return objective;
}

// Returns the number of points in each cluster.
std::vector<Eigen::Index> update_means(const Matrix& X, const std::vector<int>& labels, Matrix& centroids) {
  const auto K = centroids.rows();
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(K), 0);
  Matrix sums = Matrix::Zero(K, X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    sums.row(labels[i]) += X.row(i);
    ++counts[labels[i]];
  }
  for (Eigen::Index c = 0; c < K; ++c)
    if (counts[c] > 0) centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
  return counts;
}

LloydRun lloyd(const Matrix& X, int K, int max_iterations, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LloydRun run;
  run.centroids = seed_centroids(X, K, rng);
  const auto n = X.rows();
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> next(static_cast<std::size_t>(n));
  Vector dist(n);
  for (int it = 0; it < max_iterations; ++it) {
    run.objective = assign(X, run.centroids, next, dist);
    run.trace.push_back(run.objective);
    run.iterations = it + 1;
    const bool stable = next == run.labels;
    run.labels.swap(next);
    if (stable) break;
    const auto counts = update_means(X, run.labels, run.centroids);
    // Empty clusters restart at the point farthest from its centroid.
    for (Eigen::Index c = 0; c < K; ++c) {
      if (counts[c] > 0) continue;
      Eigen::Index far = 0;
      dist.maxCoeff(&far);
      run.centroids.row(c) = X.row(far);
      dist(far) = 0.0;
    }
  }
  update_means(X, run.labels, run.centroids);
  return run;
}

}  // namespace

double kmeans_objective(const Matrix& X, std::span<const int> labels, int K) {
  if (static_cast<Eigen::Index>(labels.size()) != X.rows()) throw std::invalid_argument("label count mismatch");
  std::vector<int> zero_based(labels.begin(), labels.end());
  for (auto& l : zero_based) {
    if (l < 1 || l > K) throw std::invalid_argument("label out of range");
    --l;
  }
  Matrix centroids = Matrix::Zero(K, X.cols());
  update_means(X, zero_based, centroids);
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) total += (X.row(i) - centroids.row(zero_based[i])).squaredNorm();
  return total;
}

KMeansResult kmeans(const Matrix& X, int K, const KMeansOptions& options) {
  if (K < 1) throw std::invalid_argument("kmeans requires K >= 1");
  if (K > X.rows()) throw std::invalid_argument("kmeans requires K <= n");
  if (options.restarts < 1) throw std::invalid_argument("kmeans requires at least one restart");
  if (options.max_iterations < 1) throw std::invalid_argument("kmeans requires at least one iteration");

  std::vector<LloydRun> runs(static_cast<std::size_t>(options.restarts));
  parallel_for(
      runs.size(),
      [&](std::size_t r) { runs[r] = lloyd(X, K, options.max_iterations, derive_seed(options.seed, r)); },
      options.workers);

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].objective < runs[best].objective) best = r;

  LloydRun& run = runs[best];
  KMeansResult out;
  out.objective = run.objective;
  out.iterations = run.iterations;
  out.best_restart = static_cast<int>(best);
  out.objective_trace = std::move(run.trace);
  out.assignment.K = K;
  out.assignment.centroids = std::move(run.centroids);
  out.assignment.labels = std::move(run.labels);
  for (auto& l : out.assignment.labels) ++l;
  return out;
}

double rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rand_index requires equal-length labelings");
  const auto n = static_cast<long long>(a.size());
  if (n < 2) throw std::invalid_argument("rand_index requires n >= 2");
  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> count_a, count_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++count_a[a[i]];
    ++count_b[b[i]];
  }
  auto pairs = [](long long m) { return m * (m - 1) / 2; };
  long long together_both = 0, together_a = 0, together_b = 0;
  for (const auto& [key, m] : joint) together_both += pairs(m);
  for (const auto& [key, m] : count_a) together_a += pairs(m);
  for (const auto& [key, m] : count_b) together_b += pairs(m);
  const long long total = pairs(n);
  const long long apart_both = total - together_a - together_b + together_both;
  return static_cast<double>(together_both + apart_both) / static_cast<double>(total);
}

int min_permutation_hamming(std::span<const int> a, std::span<const int> b, int K) {
  if (a.size() != b.size()) throw std::invalid_argument("min_permutation_hamming requires equal-length labelings");
  if (K == 0) {
    for (int l : a) K = std::max(K, l);
    for (int l : b) K = std::max(K, l);
    K = std::max(K, 1);
  }
  if (K > 8) throw std::invalid_argument("exact search bound exceeded (K > 8)");
  std::vector<long long> table(static_cast<std::size_t>(K * K), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1 || a[i] > K || b[i] < 1 || b[i] > K) throw std::invalid_argument("labels must lie in 1..K");
    ++table[(a[i] - 1) * K + (b[i] - 1)];
  }
  std::vector<int> perm(static_cast<std::size_t>(K));
  std::iota(perm.begin(), perm.end(), 0);
  long long best = 0;
  do {
    long long matched = 0;
    for (int k = 0; k < K; ++k) matched += table[k * K + perm[k]];
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<int>(static_cast<long long>(a.size()) - best);
}

}  // namespace rdpg
