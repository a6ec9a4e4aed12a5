#pragma once

#include "supnys/kernel.hpp"
#include "supnys/kmeans.hpp"
#include "supnys/linalg.hpp"
#include "supnys/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace supnys {

enum class MapVariant { standard, ensemble, rsvd, kmeans };

std::string to_string(MapVariant v);
MapVariant map_variant_from_string(const std::string &name);

/// One expert of an ensemble map: landmark rows [row_begin, row_begin + rows)
/// of the map feed output features [col_begin, col_begin + cols).
struct ExpertBlock {
  Index row_begin = 0;
  Index rows = 0;
  Index col_begin = 0;
  Index cols = 0;
  double weight = 1.0;
};

/// Explicit feature map Phi = A_hat^T K(landmarks, X).
struct NystromMap {
  MapVariant variant = MapVariant::standard;
  KernelConfig kernel;
  Points landmarks;             // n x d
  IndexSet landmark_indices;    // training rows, empty for k-means centroids
  Matrix a_hat;                 // n x r
  std::vector<ExpertBlock> blocks;
  int kmeans_iterations = 0;

  Index num_landmarks() const { return landmarks.rows(); }
  Index num_features() const { return a_hat.cols(); }
};

/// Uniform draw of n training rows without replacement.
IndexSet uniform_landmarks(Index N, Index n, std::uint64_t seed);

NystromMap fit_standard(const Points &train, const IndexSet &indices, Index k,
                        const KernelConfig &cfg);

/// m experts over consecutive, non-overlapping blocks of `indices`, each of
/// rank k/m and weight 1/m.
NystromMap fit_ensemble(const Points &train, const IndexSet &indices, Index m, Index k,
                        const KernelConfig &cfg);

NystromMap fit_rsvd(const Points &train, const IndexSet &indices, Index k, Index oversample,
                    int power, std::uint64_t seed, const KernelConfig &cfg);

/// Landmarks are the n Lloyd centroids of `pool`; rank k = n.
NystromMap fit_kmeans_nystrom(const Points &pool, Index n, const KMeansConfig &kmeans_cfg,
                              const KernelConfig &cfg);

/// Features of X, one column per point: A_hat^T gram(landmarks, X).
Matrix transform(const NystromMap &map, const Points &X, int threads = 1);

/// transform(X)^T transform(X2)
Matrix approx_kernel(const NystromMap &map, const Points &X, const Points &X2);

/// Random Fourier features sqrt(2/D) cos(omega x + phase) for the RBF kernel.
struct RFFMap {
  Matrix omega;  // D x d
  Vector phase;  // D
  double scale = 0.0;

  Index num_features() const { return omega.rows(); }
};

RFFMap fit_rff(Index d, Index D, double gamma, std::uint64_t seed);

/// D x |X| features.
Matrix rff_transform(const RFFMap &map, const Points &X);

}  // namespace supnys
