#include "supnys/kmeans.hpp"

#include "supnys/error.hpp"
#include "supnys/rng.hpp"

#include <algorithm>
#include <limits>

namespace supnys {

namespace {

double sqdist(const Points &a, Index i, const Points &b, Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

// Returns true if any assignment changed.
bool assign(const Points &pool, const Points &centroids, std::vector<int> &assignment,
            std::vector<double> &dist) {
  bool changed = false;
  for (Index i = 0; i < pool.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = sqdist(pool, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    if (assignment[i] != best) changed = true;
    assignment[i] = best;
    dist[i] = best_d;
  }
  return changed;
}

Points seed_plus_plus(const Points &pool, Index k, Rng &rng) {
  const Index N = pool.rows();
  Points centroids(k, pool.cols());
  std::vector<double> d2(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
  std::vector<char> chosen(static_cast<std::size_t>(N), 0);
  Index first = std::uniform_int_distribution<Index>(0, N - 1)(rng);
  for (Index c = 0; c < k; ++c) {
    Index pick = first;
    if (c > 0) {
      double total = 0.0;
      for (double v : d2) total += v;
      if (total > 0.0) {
        double r = std::uniform_real_distribution<double>(0.0, total)(rng);
        pick = -1;
        for (Index i = 0; i < N; ++i) {
          if (d2[i] <= 0.0) continue;
          pick = i;
          r -= d2[i];
          if (r < 0.0) break;
        }
      } else {
        // Every remaining point coincides with a centroid.
        std::vector<Index> rest;
        for (Index i = 0; i < N; ++i)
          if (!chosen[i]) rest.push_back(i);
        pick = rest[std::uniform_int_distribution<std::size_t>(0, rest.size() - 1)(rng)];
      }
    }
    chosen[pick] = 1;
    centroids.row(c) = pool.row(pick);
    for (Index i = 0; i < N; ++i) d2[i] = std::min(d2[i], sqdist(pool, i, centroids, c));
  }
  return centroids;
}

}  // namespace

double kmeans_objective(const Points &pool, const Points &centroids,
                        const std::vector<int> &assignment) {
  double total = 0.0;
  for (Index i = 0; i < pool.rows(); ++i) total += sqdist(pool, i, centroids, assignment[i]);
  return total;
}

Clustering lloyd(const Points &pool, Index num_clusters, const KMeansConfig &cfg) {
  const Index N = pool.rows();
  if (num_clusters < 1) throw invalid_argument("k-means needs at least one cluster");
  if (N < num_clusters)
    throw invalid_argument("k-means pool (" + std::to_string(N) + ") smaller than cluster count (" +
                           std::to_string(num_clusters) + ")");
  if (cfg.max_iters < 0) throw invalid_argument("max_iters must be >= 0");

  Rng rng(cfg.seed);
  Clustering out;
  out.centroids = seed_plus_plus(pool, num_clusters, rng);
  out.assignment.assign(static_cast<std::size_t>(N), -1);
  std::vector<double> dist(static_cast<std::size_t>(N));
  assign(pool, out.centroids, out.assignment, dist);
  out.objective.push_back(kmeans_objective(pool, out.centroids, out.assignment));

  std::vector<Index> counts(static_cast<std::size_t>(num_clusters));
  for (int it = 0; it < cfg.max_iters; ++it) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int a : out.assignment) ++counts[a];
    // Re-seed empty clusters with the point farthest from its centroid,
    // taken only from clusters that keep at least one member.
    for (Index c = 0; c < num_clusters; ++c) {
      if (counts[c] > 0) continue;
      Index far = -1;
      for (Index i = 0; i < N; ++i)
        if (counts[out.assignment[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
      if (far < 0) break;
      --counts[out.assignment[far]];
      out.assignment[far] = static_cast<int>(c);
      dist[far] = 0.0;
      counts[c] = 1;
    }
    Points sums = Points::Zero(num_clusters, pool.cols());
    for (Index i = 0; i < N; ++i) sums.row(out.assignment[i]) += pool.row(i);
    for (Index c = 0; c < num_clusters; ++c)
      if (counts[c] > 0) out.centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
    ++out.iterations_run;
    out.objective.push_back(kmeans_objective(pool, out.centroids, out.assignment));

    std::vector<int> previous = out.assignment;
    const bool changed = assign(pool, out.centroids, out.assignment, dist);
    if (!changed) break;
    if (it + 1 == cfg.max_iters) {
      // Out of iterations: keep the assignment the centroids are means of.
      out.assignment = std::move(previous);
      break;
    }
  }
  return out;
}

std::vector<int> label_centroids(const Clustering &c, const std::vector<int> &labels,
                                 int num_classes) {
  if (labels.size() != c.assignment.size())
    throw invalid_argument("labels are not aligned with the clustered pool");
  if (num_classes < 1) throw invalid_argument("num_classes must be positive");
  const auto L = static_cast<std::size_t>(num_classes);
  std::vector<std::vector<Index>> hist(static_cast<std::size_t>(c.size()), std::vector<Index>(L, 0));
  std::vector<Index> global(L, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 0 || y >= num_classes) throw invalid_argument("class id out of range");
    ++hist[static_cast<std::size_t>(c.assignment[i])][static_cast<std::size_t>(y)];
    ++global[static_cast<std::size_t>(y)];
  }
  // max_element returns the first maximum, i.e. the smaller class id.
  const int global_mode = static_cast<int>(std::max_element(global.begin(), global.end()) - global.begin());
  std::vector<int> out;
  out.reserve(hist.size());
  for (const auto &h : hist) {
    const auto it = std::max_element(h.begin(), h.end());
    out.push_back(*it == 0 ? global_mode : static_cast<int>(it - h.begin()));
  }
  return out;
}

}  // namespace supnys
