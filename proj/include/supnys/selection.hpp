#pragma once

#include "supnys/data.hpp"
#include "supnys/nystrom.hpp"
#include "supnys/ridge.hpp"
#include "supnys/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace supnys {

/// Per-sample negative margin -h(x_i)[y_i] of the class-own binary classifier.
struct MarginReport {
  Vector neg_margin;
  std::string source;
};

MarginReport negative_margins(const StandardClassifier &clf, const Points &X,
                              const std::vector<int> &y, int threads = 1);

/// Same, from an already computed |X| x L decision value matrix.
MarginReport negative_margins(const Matrix &decision, const std::vector<int> &y);

/// Indices of the n_f largest negative margins (ties to the smaller index),
/// sorted ascending.
IndexSet select_top(const MarginReport &report, Index n_f);

enum class CentroidMode { none, inputs, outputs };

std::string to_string(CentroidMode m);
CentroidMode centroid_mode_from_string(const std::string &name);

struct SelectionParams {
  Index n0 = 100;
  Index k0 = 100;
  Index nf = 20;
  Index kf = 20;
  double rho = 1e-5;
  KernelConfig kernel;
  MapVariant stage1 = MapVariant::standard;
  MapVariant stage2 = MapVariant::standard;
  std::uint64_t seed = 0;
  CentroidMode centroid_mode = CentroidMode::none;
  Index cluster_multiplier = 3;
  Index ensemble_experts = 5;
  Index rsvd_oversample = 10;
  int rsvd_power = 2;
  int kmeans_iters = 10;
  /// Samples fed to k-means. 0 picks a default per mode: min(N, 20000) for
  /// unsupervised pools and for support-centroid selection, min(N/2, 20000)
  /// for margin-selected k-means inputs.
  Index kmeans_pool = 0;
  int threads = 1;

  void validate(Index N) const;
};

/// Seeds of the independent random streams used by one run.
struct StageSeeds {
  std::uint64_t landmarks;
  std::uint64_t stage1_map;
  std::uint64_t kmeans;
  std::uint64_t stage2_map;
  std::uint64_t centroid_pick;

  static StageSeeds from(std::uint64_t seed);
};

struct MarginSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double selected_min = 0.0;
};

struct Diagnostics {
  double stage1_s = 0.0;  // steps 1-2
  double stage2_s = 0.0;  // steps 3-6
  double total_s = 0.0;
  std::vector<std::pair<std::string, double>> step_s;
  IndexSet stage1_landmarks;
  IndexSet selected;
  MarginSummary margins;
  int kmeans_iterations = 0;
  Index num_support = 0;
};

struct SelectionResult {
  StandardClassifier classifier;
  /// Unsupervised stage-1 classifier, for seed-paired comparisons.
  StandardClassifier stage1;
  Diagnostics diagnostics;
};

/// Fits a map of the given variant over training rows `indices`. For the
/// k-means variant the rows are the k-means pool and n is the centroid count.
NystromMap fit_variant(MapVariant variant, const Points &train, const IndexSet &indices, Index n,
                       Index k, const SelectionParams &p, std::uint64_t seed);

/// Unsupervised baseline: one map from n uniform draws (stream
/// StageSeeds::landmarks), then one-vs-rest ridge.
SelectionResult train_unsupervised(const Dataset &train, MapVariant variant, Index n, Index k,
                                   const SelectionParams &p);

/// Supervised Nystrom: stage-1 map and ridge model, negative margins on all
/// training points, top-n_f selection, stage-2 map and final ridge model.
SelectionResult algorithm1(const Dataset &train, const SelectionParams &p);

/// Negative-margin selection of the k-means inputs, then K-Means Nystrom over
/// the selected samples in stage 2.
SelectionResult algorithm1_centroid_inputs(const Dataset &train, const SelectionParams &p);

/// Clusters a pool into cluster_multiplier * n_f centroids, labels them by
/// majority vote, and selects n_f centroids by negative margin.
SelectionResult support_centroid_selection(const Dataset &train, const SelectionParams &p);

/// Dispatch on p.centroid_mode.
SelectionResult train_supervised(const Dataset &train, const SelectionParams &p);

struct BoundCheck {
  double lhs = 0.0;  // max_i |m(x_i, y_i) - m~(x_i, y_i)|
  double rhs = 0.0;  // N kappa / rho^2 ||K - K~||_2
  double kernel_error = 0.0;
  double kappa = 0.0;
};

/// Exact KRR margins on K versus approximate margins on K~ = Phi^T Phi.
BoundCheck margin_bound_gap(const Dataset &train, const NystromMap &map, double rho,
                            int power_iters = 1000, std::uint64_t seed = 0);

}  // namespace supnys
