#pragma once

#include "supnys/types.hpp"

#include <cstdint>
#include <vector>

namespace supnys {

struct KMeansConfig {
  int max_iters = 10;
  std::uint64_t seed = 0;
};

struct Clustering {
  Points centroids;
  std::vector<int> assignment;
  int iterations_run = 0;
  /// Objective (sum of squared distances to the assigned centroid) after the
  /// initial assignment and after each update.
  std::vector<double> objective;

  Index size() const { return centroids.rows(); }
};

/// k-means++ seeding followed by at most max_iters Lloyd updates. A cluster
/// that becomes empty takes the point farthest from its own centroid.
Clustering lloyd(const Points &pool, Index num_clusters, const KMeansConfig &cfg);

/// Sum of squared distances from each point to its assigned centroid.
double kmeans_objective(const Points &pool, const Points &centroids,
                        const std::vector<int> &assignment);

/// Majority vote of each cluster's members, ties to the smaller class id.
/// Empty clusters take the global modal class.
std::vector<int> label_centroids(const Clustering &c, const std::vector<int> &labels,
                                 int num_classes);

}  // namespace supnys
