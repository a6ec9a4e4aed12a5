#include "supnys/rng.hpp"

#include "supnys/error.hpp"

#include <numeric>

namespace supnys {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stage) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stage + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix gaussian_matrix(Index rows, Index cols, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(rows, cols);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
  return M;
}

IndexSet sample_without_replacement(Index N, Index n, Rng &rng) {
  if (n < 0 || n > N)
    throw invalid_argument("cannot draw " + std::to_string(n) +
                           " distinct indices from " + std::to_string(N));
  // Partial Fisher-Yates.
  IndexSet pool(static_cast<std::size_t>(N));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < n; ++i) {
    std::uniform_int_distribution<Index> pick(i, N - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(static_cast<std::size_t>(n));
  return pool;
}

}  // namespace supnys
