#include "rdpg/oracle.hpp"

#include "rdpg/parallel.hpp"

#include <cmath>
#include <vector>

namespace rdpg {
namespace {

struct Partial {
  double mass = 0.0;
  Vector first;
  Matrix second;
};

}  // namespace

GridMoments grid_posterior_moments(const AdjacencyMatrix& Y, const PriorSpec& prior, GridSpec grid) {
  const auto n = Y.n();
  if (n < 1 || n > 3) throw std::invalid_argument("grid oracle supports 1 <= n <= 3");
  if (prior.kind != PriorSpec::Kind::uniform_on_X) throw std::invalid_argument("grid oracle supports Unif(X) only");
  int m = grid.points_per_dim;
  if (m == 0) m = n <= 2 ? 400 : 60;
  if (m < 1) throw std::invalid_argument("grid needs at least one point per dimension");
  if (std::pow(static_cast<double>(m), static_cast<double>(n)) > GridSpec::kMaxCells)
    throw std::invalid_argument("grid cap exceeded");

  const Matrix& A = Y.values();
  const bool loops = Y.includes_self_loops();
  const double h = 1.0 / m;

  // Each chunk fixes the first coordinate; partial sums are combined in chunk
  // order so the result does not depend on scheduling.
  std::vector<Partial> parts(static_cast<std::size_t>(m));
  const long long inner = n == 1 ? 1 : (n == 2 ? m : static_cast<long long>(m) * m);
  parallel_for(parts.size(), [&](std::size_t chunk) {
    Partial part;
    part.first = Vector::Zero(n);
    part.second = Matrix::Zero(n, n);
    Vector x(n);
    x(0) = (static_cast<double>(chunk) + 0.5) * h;
    for (long long cell = 0; cell < inner; ++cell) {
      long long rest = cell;
      for (Eigen::Index v = 1; v < n; ++v) {
        x(v) = (static_cast<double>(rest % m) + 0.5) * h;
        rest /= m;
      }
      double lik = 1.0;
      for (Eigen::Index j = 0; j < n && lik > 0.0; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
          if (i == j && !loops) continue;
          const double p = x(i) * x(j);
          lik *= A(i, j) != 0.0 ? p : 1.0 - p;
        }
      }
      if (lik <= 0.0) continue;
      part.mass += lik;
      part.first += lik * x;
      part.second += lik * (x * x.transpose());
    }
    parts[chunk] = std::move(part);
  });

  double mass = 0.0;
  Vector first = Vector::Zero(n);
  Matrix second = Matrix::Zero(n, n);
  for (const auto& part : parts) {
    mass += part.mass;
    first += part.first;
    second += part.second;
  }
  if (!(mass > 0.0)) throw std::runtime_error("posterior has no mass on the grid");
  return {first / mass, second / mass};
}

}  // namespace rdpg
