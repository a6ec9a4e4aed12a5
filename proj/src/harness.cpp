#include "supnys/harness.hpp"

#include "supnys/error.hpp"
#include "supnys/rng.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace supnys {

std::string to_string(SynthKind k) {
  switch (k) {
    case SynthKind::two_gaussians: return "two-gaussians";
    case SynthKind::ring_vs_blob: return "ring-vs-blob";
    case SynthKind::redundant: return "redundant";
  }
  return "unknown";
}

SynthKind synth_kind_from_string(const std::string &name) {
  if (name == "two-gaussians") return SynthKind::two_gaussians;
  if (name == "ring-vs-blob") return SynthKind::ring_vs_blob;
  if (name == "redundant") return SynthKind::redundant;
  throw invalid_argument("unknown synthetic data kind '" + name + "'");
}

namespace {

Dataset two_gaussians(Index N, Index d, double separation, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset out;
  out.X.resize(N, d);
  out.y.resize(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) {
    const int c = static_cast<int>(i % 2);
    out.y[static_cast<std::size_t>(i)] = c;
    for (Index j = 0; j < d; ++j) out.X(i, j) = normal(rng);
    out.X(i, 0) += (c == 0 ? -0.5 : 0.5) * separation;
  }
  return out;
}

Dataset ring_vs_blob(Index N, Index d, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Dataset out;
  out.X.resize(N, d);
  out.y.resize(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) {
    const int c = static_cast<int>(i % 2);
    out.y[static_cast<std::size_t>(i)] = c;
    for (Index j = 0; j < d; ++j) out.X(i, j) = 0.5 * normal(rng);
    if (c == 1) {
      const double a = angle(rng), r = 3.0 + 0.3 * normal(rng);
      out.X(i, 0) = r * std::cos(a);
      if (d > 1) out.X(i, 1) = r * std::sin(a);
    }
  }
  return out;
}

}  // namespace

Dataset synth_dataset(const SynthSpec &spec) {
  if (spec.N < 2) throw invalid_argument("synthetic data needs N >= 2");
  if (spec.d < 1) throw invalid_argument("synthetic data needs d >= 1");
  Rng rng(spec.seed);
  Dataset out;
  switch (spec.kind) {
    case SynthKind::two_gaussians:
      out = two_gaussians(spec.N, spec.d, spec.separation, rng);
      break;
    case SynthKind::ring_vs_blob:
      if (spec.d < 2) throw invalid_argument("ring-vs-blob needs d >= 2");
      out = ring_vs_blob(spec.N, spec.d, rng);
      break;
    case SynthKind::redundant: {
      const Index r = spec.redundancy;
      if (r < 1 || spec.N % r != 0 || spec.N / r < 2)
        throw invalid_argument("redundant data needs N divisible by the redundancy with >= 2 base points");
      const Dataset base = two_gaussians(spec.N / r, spec.d, spec.separation, rng);
      IndexSet idx;
      idx.reserve(static_cast<std::size_t>(spec.N));
      for (Index i = 0; i < base.size(); ++i)
        for (Index k = 0; k < r; ++k) idx.push_back(i);
      out = base.subset(idx);
      break;
    }
  }
  out.num_classes = 2;
  out.class_names = {"-1", "+1"};
  out.validate();
  return out;
}

std::uint64_t model_size_bytes(const StandardClassifier &clf) {
  const auto n = static_cast<std::uint64_t>(clf.support.rows());
  const auto d = static_cast<std::uint64_t>(clf.support.cols());
  const auto L = static_cast<std::uint64_t>(clf.num_classes());
  return 8 * (n * d + n * L + L);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_field(const std::string &s, std::size_t line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw parse_error("invalid CSV field '" + s + "'", line);
  return v;
}

}  // namespace

void write_csv(const std::vector<TrialRecord> &records, std::ostream &out) {
  out << kCsvHeader << '\n';
  for (const auto &r : records)
    out << r.method << ',' << r.n0 << ',' << r.k0 << ',' << r.nf << ',' << r.kf << ',' << r.seed
        << ',' << fmt_double(r.accuracy) << ',' << fmt_double(r.stage1_s) << ','
        << fmt_double(r.stage2_s) << ',' << r.model_bytes << '\n';
}

std::vector<TrialRecord> read_csv(std::istream &in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kCsvHeader) throw parse_error("unexpected CSV header", 1);
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw parse_error("expected 10 CSV fields", line_no);
    TrialRecord r;
    r.method = f[0];
    r.n0 = parse_field<Index>(f[1], line_no);
    r.k0 = parse_field<Index>(f[2], line_no);
    r.nf = parse_field<Index>(f[3], line_no);
    r.kf = parse_field<Index>(f[4], line_no);
    r.seed = parse_field<std::uint64_t>(f[5], line_no);
    r.accuracy = parse_field<double>(f[6], line_no);
    r.stage1_s = parse_field<double>(f[7], line_no);
    r.stage2_s = parse_field<double>(f[8], line_no);
    r.model_bytes = parse_field<std::uint64_t>(f[9], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

const std::vector<std::string> &known_methods() {
  static const std::vector<std::string> names{"Nys",   "Nys+",  "ENys",    "ENys+",    "RNys",
                                              "RNys+", "KNys",  "KNys+",   "Fourier",  "KRR-exact"};
  return names;
}

namespace {

bool is_supervised(const std::string &m) { return !m.empty() && m.back() == '+'; }

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw invalid_argument("trial count must be at least 1");
  if (methods.empty()) throw invalid_argument("method list is empty");
  for (const auto &m : methods)
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end())
      throw invalid_argument("unknown method '" + m + "'");
  if (grid.empty()) throw invalid_argument("grid is empty");
  for (const auto &g : grid)
    if (g.nf < 1 || g.n0 < 1) throw invalid_argument("grid points need n0, nf >= 1");
  if (!synth && train_path.empty()) throw invalid_argument("no training data configured");
  if (!(gamma > 0.0)) throw invalid_argument("gamma must be positive");
  if (!(rho > 0.0)) throw invalid_argument("rho must be positive");
  if (threads < 1) throw invalid_argument("threads must be positive");
}

ExperimentConfig experiment_config_from_json(const json &j) {
  try {
    ExperimentConfig c;
    c.train_path = j.value("train_path", c.train_path);
    c.test_path = j.value("test_path", c.test_path);
    if (j.contains("synth")) {
      const json &s = j.at("synth");
      SynthSpec spec;
      spec.kind = synth_kind_from_string(s.value("kind", to_string(spec.kind)));
      spec.N = s.value("N", spec.N);
      spec.d = s.value("d", spec.d);
      spec.seed = s.value("seed", spec.seed);
      spec.separation = s.value("separation", spec.separation);
      spec.redundancy = s.value("redundancy", spec.redundancy);
      c.synth = spec;
    }
    c.test_fraction = j.value("test_fraction", c.test_fraction);
    c.scale = j.value("scale", c.scale);
    c.dedupe = j.value("dedupe", c.dedupe);
    c.gamma = j.value("gamma", c.gamma);
    c.rho = j.value("rho", c.rho);
    c.methods = j.value("methods", c.methods);
    if (j.contains("grid")) {
      c.grid.clear();
      for (const auto &g : j.at("grid")) c.grid.push_back({g.at("n0").get<Index>(), g.at("nf").get<Index>()});
    }
    c.trials = j.value("trials", c.trials);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.output_path = j.value("output_path", c.output_path);
    c.ensemble_experts = j.value("ensemble_experts", c.ensemble_experts);
    c.rsvd_oversample = j.value("rsvd_oversample", c.rsvd_oversample);
    c.rsvd_power = j.value("rsvd_power", c.rsvd_power);
    c.kmeans_iters = j.value("kmeans_iters", c.kmeans_iters);
    c.kmeans_pool = j.value("kmeans_pool", c.kmeans_pool);
    c.knys_plus_mode = centroid_mode_from_string(j.value("knys_plus_mode", to_string(c.knys_plus_mode)));
    c.threads = j.value("threads", c.threads);
    c.warmup = j.value("warmup", c.warmup);
    c.validate();
    return c;
  } catch (const json::exception &e) {
    throw invalid_argument(std::string("invalid experiment config: ") + e.what());
  }
}

json to_json(const ExperimentConfig &c) {
  json grid = json::array();
  for (const auto &g : c.grid) grid.push_back({{"n0", g.n0}, {"nf", g.nf}});
  json j = {{"train_path", c.train_path},
            {"test_path", c.test_path},
            {"test_fraction", c.test_fraction},
            {"scale", c.scale},
            {"dedupe", c.dedupe},
            {"gamma", c.gamma},
            {"rho", c.rho},
            {"methods", c.methods},
            {"grid", grid},
            {"trials", c.trials},
            {"base_seed", c.base_seed},
            {"output_path", c.output_path},
            {"ensemble_experts", c.ensemble_experts},
            {"rsvd_oversample", c.rsvd_oversample},
            {"rsvd_power", c.rsvd_power},
            {"kmeans_iters", c.kmeans_iters},
            {"kmeans_pool", c.kmeans_pool},
            {"knys_plus_mode", to_string(c.knys_plus_mode)},
            {"threads", c.threads},
            {"warmup", c.warmup}};
  if (c.synth)
    j["synth"] = {{"kind", to_string(c.synth->kind)}, {"N", c.synth->N},
                  {"d", c.synth->d},                  {"seed", c.synth->seed},
                  {"separation", c.synth->separation}, {"redundancy", c.synth->redundancy}};
  return j;
}

// ---------------------------------------------------------------------------
// Experiment

std::pair<Dataset, std::optional<Dataset>> load_experiment_data(const ExperimentConfig &cfg) {
  if (cfg.synth) {
    Dataset d = synth_dataset(*cfg.synth);
    if (cfg.dedupe) d = dedupe(d);
    return {std::move(d), std::nullopt};
  }
  Dataset train = load_libsvm(cfg.train_path);
  std::optional<Dataset> test;
  if (!cfg.test_path.empty()) {
    test = load_libsvm(cfg.test_path);
    const Index d = std::max(train.dim(), test->dim());
    for (Dataset *s : {&train, &*test}) {
      if (s->dim() < d) s->X.conservativeResizeLike(Points::Zero(s->size(), d));
    }
    unify_labels(train, *test);
  }
  if (cfg.dedupe) {
    train = dedupe(train);
    if (test) test = dedupe(*test);
  }
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> prepare_trial_data(const ExperimentConfig &cfg, const Dataset &train,
                                               const std::optional<Dataset> &test,
                                               std::uint64_t seed) {
  auto [tr, te] = test ? std::pair<Dataset, Dataset>{train, *test}
                       : split(train, cfg.test_fraction, seed);
  if (cfg.scale) {
    auto scaled = fit_apply_unit_scaling(tr, {te}).second;
    return {std::move(scaled[0]), std::move(scaled[1])};
  }
  return {std::move(tr), std::move(te)};
}

namespace {

using Clock = std::chrono::steady_clock;

SelectionParams base_params(const ExperimentConfig &cfg, std::uint64_t seed) {
  SelectionParams p;
  p.rho = cfg.rho;
  p.kernel.gamma = cfg.gamma;
  p.seed = seed;
  p.ensemble_experts = cfg.ensemble_experts;
  p.rsvd_oversample = cfg.rsvd_oversample;
  p.rsvd_power = cfg.rsvd_power;
  p.kmeans_iters = cfg.kmeans_iters;
  p.kmeans_pool = cfg.kmeans_pool;
  return p;
}

MapVariant method_variant(const std::string &m) {
  const std::string base = is_supervised(m) ? m.substr(0, m.size() - 1) : m;
  if (base == "Nys") return MapVariant::standard;
  if (base == "ENys") return MapVariant::ensemble;
  if (base == "RNys") return MapVariant::rsvd;
  if (base == "KNys") return MapVariant::kmeans;
  throw invalid_argument("method '" + m + "' has no Nystrom variant");
}

Index rank_for(MapVariant v, Index n) {
  return v == MapVariant::rsvd ? std::max<Index>(1, n / 2) : n;
}

}  // namespace

TrialRecord run_method(const std::string &method, const GridPoint &g, const Dataset &train,
                       const Dataset &test, const ExperimentConfig &cfg, std::uint64_t seed) {
  const auto t0 = Clock::now();
  TrialRecord r;
  r.method = method;
  r.seed = seed;
  std::vector<int> predicted;

  if (method == "Fourier") {
    KernelConfig kc{KernelKind::rbf, cfg.gamma};
    const RFFMap map = fit_rff(train.dim(), g.nf, kc.gamma, derive_seed(seed, 6));
    const RidgeModel model = train_ovr(rff_transform(map, train.X), train.y, train.num_classes, cfg.rho);
    r.stage1_s = std::chrono::duration<double>(Clock::now() - t0).count();
    predicted = argmax_rows(primal_decision_values(model, rff_transform(map, test.X)));
    r.nf = r.kf = g.nf;
    const auto D = static_cast<std::uint64_t>(g.nf), d = static_cast<std::uint64_t>(train.dim()),
               L = static_cast<std::uint64_t>(train.num_classes);
    r.model_bytes = 8 * (D * d + D + D * L + L);
  } else if (method == "KRR-exact") {
    const KernelConfig kc{KernelKind::rbf, cfg.gamma};
    const ExactKrrModel model =
        exact_krr(gram(train.X, train.X, kc), train.y, train.num_classes, cfg.rho);
    r.stage1_s = std::chrono::duration<double>(Clock::now() - t0).count();
    predicted = argmax_rows(exact_krr_decision(model, gram(train.X, test.X, kc)));
    r.nf = r.kf = train.size();
    const auto n = static_cast<std::uint64_t>(train.size()), d = static_cast<std::uint64_t>(train.dim()),
               L = static_cast<std::uint64_t>(train.num_classes);
    r.model_bytes = 8 * (n * d + n * L + L);
  } else {
    const MapVariant variant = method_variant(method);
    SelectionParams p = base_params(cfg, seed);
    SelectionResult res;
    if (!is_supervised(method)) {
      r.nf = g.nf;
      r.kf = rank_for(variant, g.nf);
      res = train_unsupervised(train, variant, r.nf, r.kf, p);
    } else {
      p.n0 = r.n0 = g.n0;
      p.k0 = r.k0 = rank_for(variant, g.n0);
      p.nf = r.nf = g.nf;
      p.kf = r.kf = rank_for(variant, g.nf);
      p.stage1 = p.stage2 = variant;
      if (variant == MapVariant::kmeans) {
        p.centroid_mode = cfg.knys_plus_mode;
        if (p.centroid_mode == CentroidMode::outputs) {
          p.stage1 = p.stage2 = MapVariant::standard;
          // Stage 1 draws from the 3 nf centroids, so n0 cannot exceed them.
          p.n0 = p.k0 = r.n0 = r.k0 = std::min(g.n0, p.cluster_multiplier * g.nf);
        }
      }
      res = train_supervised(train, p);
    }
    r.stage1_s = res.diagnostics.stage1_s;
    r.stage2_s = res.diagnostics.stage2_s;
    r.model_bytes = model_size_bytes(res.classifier);
    predicted = predict(res.classifier, test.X);
  }
  r.accuracy = accuracy(predicted, test.y);
  r.total_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig &cfg) {
  cfg.validate();
  const auto [train, test] = load_experiment_data(cfg);

  // Per-trial job list in a fixed order.
  struct Job {
    std::string method;
    GridPoint g;
  };
  std::vector<Job> jobs;
  for (const auto &m : cfg.methods) {
    if (m == "KRR-exact") {
      jobs.push_back({m, cfg.grid.front()});
    } else if (is_supervised(m)) {
      for (const auto &g : cfg.grid) jobs.push_back({m, g});
    } else {
      std::set<Index> seen;
      for (const auto &g : cfg.grid)
        if (seen.insert(g.nf).second) jobs.push_back({m, {0, g.nf}});
    }
  }

  if (cfg.warmup) {
    const auto [tr, te] = prepare_trial_data(cfg, train, test, cfg.base_seed);
    (void)run_method(jobs.front().method, jobs.front().g, tr, te, cfg, cfg.base_seed);
  }

  std::vector<std::vector<TrialRecord>> per_trial(static_cast<std::size_t>(cfg.trials));
  std::mutex error_mutex;
  std::exception_ptr failure;
  auto run_trial = [&](int t) {
    try {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(t);
      const auto [tr, te] = prepare_trial_data(cfg, train, test, seed);
      for (const auto &job : jobs)
        per_trial[static_cast<std::size_t>(t)].push_back(run_method(job.method, job.g, tr, te, cfg, seed));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const int workers = std::min(cfg.threads, cfg.trials);
  if (workers <= 1) {
    for (int t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int t = w; t < cfg.trials; t += workers) run_trial(t);
      });
    for (auto &th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TrialRecord> out;
  for (auto &v : per_trial) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

}  // namespace supnys
