#include "supnys/nystrom.hpp"

#include "supnys/error.hpp"
#include "supnys/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace supnys {

std::string to_string(MapVariant v) {
  switch (v) {
    case MapVariant::standard: return "standard";
    case MapVariant::ensemble: return "ensemble";
    case MapVariant::rsvd: return "rsvd";
    case MapVariant::kmeans: return "kmeans";
  }
  return "unknown";
}

MapVariant map_variant_from_string(const std::string &name) {
  if (name == "standard") return MapVariant::standard;
  if (name == "ensemble") return MapVariant::ensemble;
  if (name == "rsvd") return MapVariant::rsvd;
  if (name == "kmeans") return MapVariant::kmeans;
  throw invalid_argument("unknown map variant '" + name + "'");
}

IndexSet uniform_landmarks(Index N, Index n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_without_replacement(N, n, rng);
}

namespace {

Points gather(const Points &X, const IndexSet &idx) {
  Points out(static_cast<Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= X.rows()) throw invalid_argument("landmark index out of range");
    out.row(static_cast<Index>(i)) = X.row(idx[i]);
  }
  return out;
}

void check_indices(const Points &train, const IndexSet &indices, Index k) {
  if (indices.empty()) throw invalid_argument("no landmarks given");
  if (std::set<Index>(indices.begin(), indices.end()).size() != indices.size())
    throw invalid_argument("duplicate landmark indices");
  if (static_cast<Index>(indices.size()) > train.rows())
    throw invalid_argument("more landmarks than training points");
  if (k < 1 || k > static_cast<Index>(indices.size()))
    throw invalid_argument("rank k must satisfy 1 <= k <= n");
}

NystromMap from_factor(MapVariant variant, const Points &landmarks, const CompactFactor &f,
                       const KernelConfig &cfg) {
  NystromMap map;
  map.variant = variant;
  map.kernel = cfg;
  map.landmarks = landmarks;
  map.a_hat = whitening_map(f);
  map.blocks.push_back({0, landmarks.rows(), 0, map.a_hat.cols(), 1.0});
  return map;
}

}  // namespace

NystromMap fit_standard(const Points &train, const IndexSet &indices, Index k,
                        const KernelConfig &cfg) {
  check_indices(train, indices, k);
  const Points L = gather(train, indices);
  NystromMap map = from_factor(MapVariant::standard, L, compact_eig_psd(gram(L, L, cfg), k), cfg);
  map.landmark_indices = indices;
  return map;
}

NystromMap fit_ensemble(const Points &train, const IndexSet &indices, Index m, Index k,
                        const KernelConfig &cfg) {
  check_indices(train, indices, k);
  const auto n = static_cast<Index>(indices.size());
  if (m < 1 || n % m != 0 || k % m != 0)
    throw invalid_argument("ensemble needs n and k divisible by the expert count");
  const Index n_sub = n / m, k_sub = k / m;
  const double mu = 1.0 / static_cast<double>(m);

  const Points L = gather(train, indices);
  std::vector<Matrix> parts;
  std::vector<ExpertBlock> blocks;
  Index cols = 0;
  for (Index e = 0; e < m; ++e) {
    const Points sub = L.middleRows(e * n_sub, n_sub);
    const CompactFactor f = compact_eig_psd(gram(sub, sub, cfg), k_sub);
    parts.push_back(std::sqrt(mu) * whitening_map(f));
    blocks.push_back({e * n_sub, n_sub, cols, f.rank(), mu});
    cols += f.rank();
  }
  NystromMap map;
  map.variant = MapVariant::ensemble;
  map.kernel = cfg;
  map.landmarks = L;
  map.landmark_indices = indices;
  map.a_hat = Matrix::Zero(n, cols);
  for (std::size_t e = 0; e < parts.size(); ++e) {
    const auto &b = blocks[e];
    map.a_hat.block(b.row_begin, b.col_begin, b.rows, b.cols) = parts[e];
  }
  map.blocks = std::move(blocks);
  return map;
}

NystromMap fit_rsvd(const Points &train, const IndexSet &indices, Index k, Index oversample,
                    int power, std::uint64_t seed, const KernelConfig &cfg) {
  check_indices(train, indices, k);
  const Points L = gather(train, indices);
  NystromMap map = from_factor(
      MapVariant::rsvd, L, randomized_eig_psd(gram(L, L, cfg), k, oversample, power, seed), cfg);
  map.landmark_indices = indices;
  return map;
}

NystromMap fit_kmeans_nystrom(const Points &pool, Index n, const KMeansConfig &kmeans_cfg,
                              const KernelConfig &cfg) {
  if (pool.rows() < n) throw invalid_argument("k-means pool smaller than landmark count");
  const Clustering c = lloyd(pool, n, kmeans_cfg);
  NystromMap map =
      from_factor(MapVariant::kmeans, c.centroids, compact_eig_psd(gram(c.centroids, c.centroids, cfg), n), cfg);
  map.kmeans_iterations = c.iterations_run;
  return map;
}

Matrix transform(const NystromMap &map, const Points &X, int threads) {
  if (X.rows() == 0) return Matrix(map.num_features(), 0);
  if (X.cols() != map.landmarks.cols()) throw invalid_argument("transform: dimension mismatch");
  return map.a_hat.transpose() * gram(map.landmarks, X, map.kernel, threads);
}

Matrix approx_kernel(const NystromMap &map, const Points &X, const Points &X2) {
  return transform(map, X).transpose() * transform(map, X2);
}

RFFMap fit_rff(Index d, Index D, double gamma, std::uint64_t seed) {
  if (D < 1) throw invalid_argument("RFF needs at least one feature");
  if (d < 1) throw invalid_argument("RFF input dimension must be positive");
  if (!(gamma > 0.0)) throw invalid_argument("kernel gamma must be positive");
  Rng rng(seed);
  RFFMap map;
  // Spectral density of exp(-gamma ||.||^2) is N(0, 2 gamma I).
  map.omega = gaussian_matrix(D, d, rng) * std::sqrt(2.0 * gamma);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
  map.phase.resize(D);
  for (Index i = 0; i < D; ++i) map.phase(i) = unif(rng);
  map.scale = std::sqrt(2.0 / static_cast<double>(D));
  return map;
}

Matrix rff_transform(const RFFMap &map, const Points &X) {
  if (X.rows() > 0 && X.cols() != map.omega.cols())
    throw invalid_argument("rff_transform: dimension mismatch");
  Matrix Z = map.omega * X.transpose();
  Z.colwise() += map.phase;
  return map.scale * Z.array().cos().matrix();
}

}  // namespace supnys
