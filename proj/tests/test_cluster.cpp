#include "doctest.h"

#include "rdpg/cluster.hpp"
#include "rdpg/model.hpp"
#include "rdpg/spectral.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

using namespace rdpg;

namespace {

std::vector<int> random_labels(std::size_t n, int K, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, K);
  std::vector<int> labels(n);
  for (auto& v : labels) v = pick(rng);
  return labels;
}

double enumerated_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double agree = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      agree += ((a[i] == a[j]) == (b[i] == b[j])) ? 1.0 : 0.0;
      pairs += 1.0;
    }
  return agree / pairs;
}

int enumerated_hamming(const std::vector<int>& a, const std::vector<int>& b, int K) {
  std::vector<int> sigma(K);
  std::iota(sigma.begin(), sigma.end(), 1);
  int best = std::numeric_limits<int>::max();
  do {
    int miss = 0;
    for (std::size_t i = 0; i < a.size(); ++i) miss += sigma[a[i] - 1] != b[i];
    best = std::min(best, miss);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

}  // namespace

TEST_CASE("k-means edge cases") {
  Matrix X(4, 2);
  X << 0, 0, 1, 0, 0, 1, 5, 5;
  SUBCASE("K = n puts every point alone") {
    const auto r = kmeans(X, 4, {.restarts = 3, .seed = 1});
    CHECK(r.objective == 0.0);
    std::vector<int> labels = r.assignment.labels;
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<int>{1, 2, 3, 4});
  }
  SUBCASE("K = 1 centroid is the mean") {
    const auto r = kmeans(X, 1);
    CHECK(r.assignment.centroids(0, 0) == doctest::Approx(1.5));
    CHECK(r.assignment.centroids(0, 1) == doctest::Approx(1.5));
    CHECK(r.objective == doctest::Approx(kmeans_objective(X, r.assignment.labels, 1)));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(kmeans(X, 5), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(X, 0), std::invalid_argument);
  }
}

TEST_CASE("k-means reaches the brute-force optimum on tiny inputs") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix X(6, 2);
    for (auto& v : X.reshaped()) v = normal(rng);
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < (1 << 6) - 1; ++mask) {
      std::vector<int> labels(6);
      for (int i = 0; i < 6; ++i) labels[i] = (mask >> i & 1) + 1;
      best = std::min(best, kmeans_objective(X, labels, 2));
    }
    const auto r = kmeans(X, 2, {.restarts = 20, .seed = static_cast<std::uint64_t>(trial)});
    CHECK(r.objective == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("k-means objective never increases and results are reproducible") {
  auto [X, truth] = sbm_to_latent(table1_sbm(5), 300, 3);
  const auto Y = sample_rdpg(X, 4);
  const Matrix E = adjacency_spectral_embedding(Y, 2).values();
  const auto a = kmeans(E, 5, {.restarts = 5, .seed = 9});
  for (std::size_t t = 1; t < a.objective_trace.size(); ++t)
    CHECK(a.objective_trace[t] <= a.objective_trace[t - 1] + 1e-12);
  CHECK(a.objective == doctest::Approx(kmeans_objective(E, a.assignment.labels, 5)));
  const auto b = kmeans(E, 5, {.restarts = 5, .seed = 9, .workers = 1});
  CHECK(a.assignment.labels == b.assignment.labels);
  CHECK(a.objective == b.objective);
}

TEST_CASE("well-separated blocks are recovered exactly") {
  auto [X, truth] = sbm_to_latent(table1_sbm(3), 90, 2);
  const auto r = kmeans(X.values(), 3, {.restarts = 5, .seed = 1});
  CHECK(min_permutation_hamming(r.assignment.labels, truth.labels) == 0);
  CHECK(rand_index(r.assignment.labels, truth.labels) == 1.0);
  CHECK(r.objective == doctest::Approx(0.0));
}

TEST_CASE("Rand index and Hamming examples") {
  const std::vector<int> a{1, 1, 2}, b{1, 2, 2};
  CHECK(rand_index(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(min_permutation_hamming(a, b) == 1);
  const std::vector<int> c{1, 2, 3}, d{1, 1, 1};
  CHECK(rand_index(c, d) == 0.0);
  CHECK(rand_index(std::vector<int>{1, 1, 2, 2}, std::vector<int>{2, 2, 1, 1}) == 1.0);
  CHECK(min_permutation_hamming(std::vector<int>{1, 1, 2, 2}, std::vector<int>{2, 2, 1, 1}) == 0);
  CHECK(rand_index(std::vector<int>{1, 1, 2, 2}, std::vector<int>{1, 2, 1, 2}) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(rand_index(std::vector<int>{1}, std::vector<int>{1}), std::invalid_argument);
  CHECK_THROWS_AS(rand_index(a, std::vector<int>{1, 2}), std::invalid_argument);
  const std::vector<int> nine{1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS_WITH_AS(min_permutation_hamming(nine, nine), "exact search bound exceeded (K > 8)",
                       std::invalid_argument);
}

TEST_CASE("pair-counting metrics match exhaustive enumeration") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> pick_n(2, 8), pick_K(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(pick_n(rng));
    const int K = pick_K(rng);
    const auto a = random_labels(n, K, rng);
    const auto b = random_labels(n, K, rng);
    CHECK(rand_index(a, b) == doctest::Approx(enumerated_rand_index(a, b)).epsilon(1e-15));
    CHECK(min_permutation_hamming(a, b, K) == enumerated_hamming(a, b, K));
    CHECK(rand_index(a, b) == rand_index(b, a));
    CHECK(min_permutation_hamming(a, b, K) == min_permutation_hamming(b, a, K));

    // Relabeling either side changes neither metric.
    std::vector<int> perm(K);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = perm[a[i] - 1];
    CHECK(rand_index(relabeled, b) == rand_index(a, b));
    CHECK(min_permutation_hamming(relabeled, b, K) == min_permutation_hamming(a, b, K));
    CHECK(rand_index(a, a) == 1.0);
  }
}
