#include "supnys/selection.hpp"

#include "supnys/error.hpp"
#include "supnys/rng.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace supnys {

MarginReport negative_margins(const Matrix &decision, const std::vector<int> &y) {
  if (decision.rows() != static_cast<Index>(y.size()))
    throw invalid_argument("negative_margins: label count mismatch");
  MarginReport r;
  r.neg_margin.resize(decision.rows());
  for (Index i = 0; i < decision.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    if (c < 0 || c >= decision.cols()) throw invalid_argument("class id out of range");
    r.neg_margin(i) = -decision(i, c);
  }
  return r;
}

MarginReport negative_margins(const StandardClassifier &clf, const Points &X,
                              const std::vector<int> &y, int threads) {
  MarginReport r = negative_margins(decision_values(clf, X, threads), y);
  r.source = "standard";
  return r;
}

IndexSet select_top(const MarginReport &report, Index n_f) {
  const Index N = report.neg_margin.size();
  if (n_f < 0 || n_f > N)
    throw invalid_argument("cannot select " + std::to_string(n_f) + " of " + std::to_string(N) +
                           " samples");
  IndexSet idx(static_cast<std::size_t>(N));
  std::iota(idx.begin(), idx.end(), Index{0});
  const auto &m = report.neg_margin;
  auto before = [&m](Index a, Index b) { return m(a) > m(b) || (m(a) == m(b) && a < b); };
  std::nth_element(idx.begin(), idx.begin() + n_f, idx.end(), before);
  idx.resize(static_cast<std::size_t>(n_f));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::string to_string(CentroidMode m) {
  switch (m) {
    case CentroidMode::none: return "none";
    case CentroidMode::inputs: return "inputs";
    case CentroidMode::outputs: return "outputs";
  }
  return "unknown";
}

CentroidMode centroid_mode_from_string(const std::string &name) {
  if (name == "none") return CentroidMode::none;
  if (name == "inputs") return CentroidMode::inputs;
  if (name == "outputs") return CentroidMode::outputs;
  throw invalid_argument("unknown centroid mode '" + name + "'");
}

void SelectionParams::validate(Index N) const {
  if (!(rho > 0.0)) throw invalid_argument("rho must be positive");
  kernel.validate();
  if (n0 < 1 || nf < 1) throw invalid_argument("n0 and nf must be positive");
  if (k0 < 1 || k0 > n0) throw invalid_argument("k0 must satisfy 1 <= k0 <= n0");
  if (kf < 1 || kf > nf) throw invalid_argument("kf must satisfy 1 <= kf <= nf");
  if (centroid_mode == CentroidMode::none && (n0 > N || nf > N))
    throw invalid_argument("n0 and nf must not exceed the training set size");
  if (cluster_multiplier < 1) throw invalid_argument("cluster_multiplier must be positive");
  if (kmeans_iters < 0) throw invalid_argument("kmeans_iters must be >= 0");
  if (threads < 1) throw invalid_argument("threads must be positive");
}

StageSeeds StageSeeds::from(std::uint64_t seed) {
  return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3), derive_seed(seed, 4),
          derive_seed(seed, 5)};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class StepTimer {
 public:
  explicit StepTimer(Diagnostics &d) : d_(d), t_(Clock::now()) {}
  double lap(const std::string &name) {
    const double s = seconds_since(t_);
    d_.step_s.emplace_back(name, s);
    t_ = Clock::now();
    return s;
  }

 private:
  Diagnostics &d_;
  Clock::time_point t_;
};

Points gather_rows(const Points &X, const IndexSet &idx) {
  Points out(static_cast<Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = X.row(idx[i]);
  return out;
}

Index pool_size(const SelectionParams &p, Index N, Index fallback) {
  return p.kmeans_pool > 0 ? std::min(p.kmeans_pool, N) : std::min(fallback, N);
}

MarginSummary summarize(const MarginReport &r, const IndexSet &selected) {
  MarginSummary s;
  if (r.neg_margin.size() == 0) return s;
  s.min = r.neg_margin.minCoeff();
  s.max = r.neg_margin.maxCoeff();
  s.mean = r.neg_margin.mean();
  s.selected_min = s.max;
  for (Index i : selected) s.selected_min = std::min(s.selected_min, r.neg_margin(i));
  return s;
}

struct Stage {
  NystromMap map;
  RidgeModel model;
  Matrix features;
};

Stage fit_stage(const NystromMap &map, const Dataset &train, const SelectionParams &p) {
  Stage s{map, {}, transform(map, train.X, p.threads)};
  s.model = train_ovr(s.features, train.y, train.num_classes, p.rho);
  return s;
}

// Stage 1 of every supervised flow and the unsupervised baseline.
NystromMap fit_uniform_map(const Dataset &train, MapVariant variant, Index n, Index k,
                           const SelectionParams &p, const StageSeeds &seeds) {
  const Index N = train.size();
  if (variant == MapVariant::kmeans) {
    const Index pool = pool_size(p, N, 20000);
    if (pool < n) throw invalid_argument("k-means pool smaller than landmark count");
    return fit_variant(variant, train.X, uniform_landmarks(N, pool, seeds.landmarks), n, k, p,
                       seeds.kmeans);
  }
  return fit_variant(variant, train.X, uniform_landmarks(N, n, seeds.landmarks), n, k, p,
                     seeds.stage1_map);
}

}  // namespace

NystromMap fit_variant(MapVariant variant, const Points &train, const IndexSet &indices, Index n,
                       Index k, const SelectionParams &p, std::uint64_t seed) {
  switch (variant) {
    case MapVariant::standard: return fit_standard(train, indices, k, p.kernel);
    case MapVariant::ensemble:
      return fit_ensemble(train, indices, p.ensemble_experts, k, p.kernel);
    case MapVariant::rsvd: {
      const Index oversample = std::min(p.rsvd_oversample, static_cast<Index>(indices.size()) - k);
      return fit_rsvd(train, indices, k, oversample, p.rsvd_power, seed, p.kernel);
    }
    case MapVariant::kmeans:
      return fit_kmeans_nystrom(gather_rows(train, indices), n, {p.kmeans_iters, seed},
                                p.kernel);
  }
  throw invalid_argument("unknown map variant");
}

SelectionResult train_unsupervised(const Dataset &train, MapVariant variant, Index n, Index k,
                                   const SelectionParams &p) {
  const auto t0 = Clock::now();
  const StageSeeds seeds = StageSeeds::from(p.seed);
  SelectionResult out;
  StepTimer timer(out.diagnostics);
  const NystromMap map = fit_uniform_map(train, variant, n, k, p, seeds);
  timer.lap("map");
  const Stage s = fit_stage(map, train, p);
  timer.lap("ridge");
  out.classifier = to_standard_form(s.model, s.map, train.class_names);
  out.stage1 = out.classifier;
  out.diagnostics.stage1_landmarks = map.landmark_indices;
  out.diagnostics.kmeans_iterations = map.kmeans_iterations;
  out.diagnostics.num_support = out.classifier.num_support();
  out.diagnostics.stage1_s = seconds_since(t0);
  out.diagnostics.total_s = out.diagnostics.stage1_s;
  return out;
}

SelectionResult algorithm1(const Dataset &train, const SelectionParams &p) {
  p.validate(train.size());
  const auto t0 = Clock::now();
  const StageSeeds seeds = StageSeeds::from(p.seed);
  SelectionResult out;
  Diagnostics &diag = out.diagnostics;
  StepTimer timer(diag);

  // Steps 1-2.
  const NystromMap map1 = fit_uniform_map(train, p.stage1, p.n0, p.k0, p, seeds);
  timer.lap("step1_map");
  const Stage s1 = fit_stage(map1, train, p);
  timer.lap("step2_ridge");
  out.stage1 = to_standard_form(s1.model, s1.map, train.class_names);
  diag.stage1_s = seconds_since(t0);
  const auto t1 = Clock::now();

  // Steps 3-4.
  const MarginReport report = negative_margins(primal_decision_values(s1.model, s1.features), train.y);
  timer.lap("step3_margins");
  diag.selected = select_top(report, p.nf);
  timer.lap("step4_select");

  // Steps 5-6.
  const NystromMap map2 = fit_variant(p.stage2, train.X, diag.selected, p.nf, p.kf, p,
                                      p.stage2 == MapVariant::kmeans ? seeds.kmeans : seeds.stage2_map);
  timer.lap("step5_map");
  const Stage s2 = fit_stage(map2, train, p);
  out.classifier = to_standard_form(s2.model, s2.map, train.class_names);
  timer.lap("step6_ridge");
  diag.stage2_s = seconds_since(t1);
  diag.total_s = seconds_since(t0);

  diag.stage1_landmarks = map1.landmark_indices;
  diag.margins = summarize(report, diag.selected);
  diag.kmeans_iterations = std::max(map1.kmeans_iterations, map2.kmeans_iterations);
  diag.num_support = out.classifier.num_support();
  return out;
}

SelectionResult algorithm1_centroid_inputs(const Dataset &train, const SelectionParams &p) {
  p.validate(train.size());
  const Index N = train.size();
  const Index pool = pool_size(p, N, std::max<Index>(N / 2, 1));
  if (pool < p.nf) throw invalid_argument("k-means input pool smaller than nf");
  const auto t0 = Clock::now();
  const StageSeeds seeds = StageSeeds::from(p.seed);
  SelectionResult out;
  Diagnostics &diag = out.diagnostics;
  StepTimer timer(diag);

  const NystromMap map1 = fit_uniform_map(train, p.stage1, p.n0, p.k0, p, seeds);
  timer.lap("step1_map");
  const Stage s1 = fit_stage(map1, train, p);
  timer.lap("step2_ridge");
  out.stage1 = to_standard_form(s1.model, s1.map, train.class_names);
  diag.stage1_s = seconds_since(t0);
  const auto t1 = Clock::now();

  const MarginReport report = negative_margins(primal_decision_values(s1.model, s1.features), train.y);
  timer.lap("step3_margins");
  diag.selected = select_top(report, pool);
  timer.lap("step4_select");

  const NystromMap map2 = fit_variant(MapVariant::kmeans, train.X, diag.selected, p.nf, p.nf, p,
                                      seeds.kmeans);
  timer.lap("step5_kmeans_map");
  const Stage s2 = fit_stage(map2, train, p);
  out.classifier = to_standard_form(s2.model, s2.map, train.class_names);
  timer.lap("step6_ridge");
  diag.stage2_s = seconds_since(t1);
  diag.total_s = seconds_since(t0);

  diag.stage1_landmarks = map1.landmark_indices;
  diag.margins = summarize(report, diag.selected);
  diag.kmeans_iterations = std::max(map1.kmeans_iterations, map2.kmeans_iterations);
  diag.num_support = out.classifier.num_support();
  return out;
}

SelectionResult support_centroid_selection(const Dataset &train, const SelectionParams &p) {
  p.validate(train.size());
  const Index N = train.size();
  const Index clusters = p.cluster_multiplier * p.nf;
  const Index pool = pool_size(p, N, 20000);
  if (pool < clusters)
    throw invalid_argument("pool of " + std::to_string(pool) + " samples is smaller than " +
                           std::to_string(clusters) + " clusters");
  if (p.n0 > clusters) throw invalid_argument("n0 exceeds the number of centroids");

  const auto t0 = Clock::now();
  const StageSeeds seeds = StageSeeds::from(p.seed);
  SelectionResult out;
  Diagnostics &diag = out.diagnostics;
  StepTimer timer(diag);

  const IndexSet pool_idx = uniform_landmarks(N, pool, seeds.landmarks);
  const Points pool_X = gather_rows(train.X, pool_idx);
  std::vector<int> pool_y;
  pool_y.reserve(pool_idx.size());
  for (Index i : pool_idx) pool_y.push_back(train.y[static_cast<std::size_t>(i)]);
  const Clustering clustering = lloyd(pool_X, clusters, {p.kmeans_iters, seeds.kmeans});
  const std::vector<int> centroid_y = label_centroids(clustering, pool_y, train.num_classes);
  timer.lap("kmeans");

  // Stage 1 on n0 randomly chosen centroids.
  const IndexSet picked = uniform_landmarks(clusters, p.n0, seeds.centroid_pick);
  NystromMap map1 = fit_variant(p.stage1 == MapVariant::kmeans ? MapVariant::standard : p.stage1,
                                clustering.centroids, picked, p.n0, p.k0, p, seeds.stage1_map);
  timer.lap("step1_map");
  const Stage s1 = fit_stage(map1, train, p);
  timer.lap("step2_ridge");
  out.stage1 = to_standard_form(s1.model, s1.map, train.class_names);
  diag.stage1_s = seconds_since(t0);
  const auto t1 = Clock::now();

  const Matrix centroid_features = transform(map1, clustering.centroids, p.threads);
  const MarginReport report =
      negative_margins(primal_decision_values(s1.model, centroid_features), centroid_y);
  timer.lap("step3_margins");
  diag.selected = select_top(report, p.nf);
  timer.lap("step4_select");

  NystromMap map2 = fit_variant(p.stage2 == MapVariant::kmeans ? MapVariant::standard : p.stage2,
                                clustering.centroids, diag.selected, p.nf, p.kf, p,
                                seeds.stage2_map);
  map2.landmark_indices.clear();
  timer.lap("step5_map");
  const Stage s2 = fit_stage(map2, train, p);
  out.classifier = to_standard_form(s2.model, s2.map, train.class_names);
  timer.lap("step6_ridge");
  diag.stage2_s = seconds_since(t1);
  diag.total_s = seconds_since(t0);

  diag.stage1_landmarks = picked;
  diag.margins = summarize(report, diag.selected);
  diag.kmeans_iterations = clustering.iterations_run;
  diag.num_support = out.classifier.num_support();
  return out;
}

SelectionResult train_supervised(const Dataset &train, const SelectionParams &p) {
  switch (p.centroid_mode) {
    case CentroidMode::none: return algorithm1(train, p);
    case CentroidMode::inputs: return algorithm1_centroid_inputs(train, p);
    case CentroidMode::outputs: return support_centroid_selection(train, p);
  }
  throw invalid_argument("unknown centroid mode");
}

BoundCheck margin_bound_gap(const Dataset &train, const NystromMap &map, double rho,
                            int power_iters, std::uint64_t seed) {
  const Index N = train.size();
  if (N > kExactKrrCap) throw invalid_argument("margin_bound_gap: training set exceeds the exact KRR cap");
  const Matrix K = gram(train.X, train.X, map.kernel);
  const Matrix Phi = transform(map, train.X);
  Matrix K_approx = Phi.transpose() * Phi;
  K_approx = 0.5 * (K_approx + K_approx.transpose());

  const ExactKrrModel exact = exact_krr(K, train.y, train.num_classes, rho);
  const ExactKrrModel approx = exact_krr(K_approx, train.y, train.num_classes, rho);

  BoundCheck r;
  r.lhs = (exact.margins - approx.margins).cwiseAbs().maxCoeff();
  r.kernel_error = spectral_norm(K - K_approx, power_iters, seed);
  r.kappa = std::max(kappa(map.kernel), K_approx.diagonal().maxCoeff());
  r.rhs = static_cast<double>(N) * r.kappa / (rho * rho) * r.kernel_error;
  return r;
}

}  // namespace supnys
