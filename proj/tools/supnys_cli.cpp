// Command-line front end: train, predict, bench, bound-check, synth.

#include "supnys/data.hpp"
#include "supnys/error.hpp"
#include "supnys/harness.hpp"
#include "supnys/json_io.hpp"
#include "supnys/selection.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>

namespace {

using namespace supnys;

// Fills `value` from the JSON config when the flag was not given explicitly.
template <typename T>
void from_config(const CLI::App &app, const json &cfg, const std::string &flag, const std::string &key,
                 T &value) {
  if (app.count(flag) == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

json load_config(const std::string &path) { return path.empty() ? json::object() : read_json_file(path); }

json scaling_to_json(const ScalingParams &s) {
  return {{"min", std::vector<double>(s.min.data(), s.min.data() + s.min.size())},
          {"max", std::vector<double>(s.max.data(), s.max.data() + s.max.size())}};
}

ScalingParams scaling_from_json(const json &j) {
  const auto lo = j.at("min").get<std::vector<double>>(), hi = j.at("max").get<std::vector<double>>();
  ScalingParams s;
  s.min = Eigen::Map<const Vector>(lo.data(), static_cast<Index>(lo.size()));
  s.max = Eigen::Map<const Vector>(hi.data(), static_cast<Index>(hi.size()));
  return s;
}

struct TrainOptions {
  std::string config, train, model = "model.json", diagnostics;
  double gamma = 1.0, rho = 1e-5;
  Index n0 = 100, k0 = 0, nf = 20, kf = 0;
  std::string stage1 = "standard", stage2 = "standard", centroid_mode = "none";
  std::uint64_t seed = 0;
  bool scale = true, dedupe = false, unsupervised = false;
  Index kmeans_pool = 0;
  int kmeans_iters = 10;
  int threads = 1;
};

int run_train(const CLI::App &app, TrainOptions o) {
  const json cfg = load_config(o.config);
  from_config(app, cfg, "--train", "train_path", o.train);
  from_config(app, cfg, "--model", "model_path", o.model);
  from_config(app, cfg, "--diagnostics", "diagnostics_path", o.diagnostics);
  from_config(app, cfg, "--gamma", "gamma", o.gamma);
  from_config(app, cfg, "--rho", "rho", o.rho);
  from_config(app, cfg, "--n0", "n0", o.n0);
  from_config(app, cfg, "--k0", "k0", o.k0);
  from_config(app, cfg, "--nf", "nf", o.nf);
  from_config(app, cfg, "--kf", "kf", o.kf);
  from_config(app, cfg, "--stage1", "stage1", o.stage1);
  from_config(app, cfg, "--stage2", "stage2", o.stage2);
  from_config(app, cfg, "--centroid-mode", "centroid_mode", o.centroid_mode);
  from_config(app, cfg, "--seed", "seed", o.seed);
  from_config(app, cfg, "--scale", "scale", o.scale);
  from_config(app, cfg, "--dedupe", "dedupe", o.dedupe);
  from_config(app, cfg, "--unsupervised", "unsupervised", o.unsupervised);
  from_config(app, cfg, "--kmeans-pool", "kmeans_pool", o.kmeans_pool);
  from_config(app, cfg, "--kmeans-iters", "kmeans_iters", o.kmeans_iters);
  from_config(app, cfg, "--threads", "threads", o.threads);
  if (o.train.empty()) throw invalid_argument("no training file given (--train)");

  Dataset train = load_libsvm(o.train);
  if (o.dedupe) train = dedupe(train);
  std::optional<ScalingParams> scaling;
  if (o.scale) {
    auto [params, scaled] = fit_apply_unit_scaling(train, {});
    scaling = std::move(params);
    train = std::move(scaled[0]);
  }

  SelectionParams p;
  p.kernel.gamma = o.gamma;
  p.rho = o.rho;
  p.n0 = o.n0;
  p.k0 = o.k0 > 0 ? o.k0 : o.n0;
  p.nf = o.nf;
  p.kf = o.kf > 0 ? o.kf : o.nf;
  p.stage1 = map_variant_from_string(o.stage1);
  p.stage2 = map_variant_from_string(o.stage2);
  p.centroid_mode = centroid_mode_from_string(o.centroid_mode);
  p.seed = o.seed;
  p.kmeans_pool = o.kmeans_pool;
  p.kmeans_iters = o.kmeans_iters;
  p.threads = o.threads;

  const SelectionResult res = o.unsupervised ? train_unsupervised(train, p.stage2, p.nf, p.kf, p)
                                             : train_supervised(train, p);
  json model = to_json(res.classifier);
  if (scaling) model["scaling"] = scaling_to_json(*scaling);
  write_json_file(model, o.model);
  const json diag = to_json(res.diagnostics);
  if (!o.diagnostics.empty()) write_json_file(diag, o.diagnostics);

  const std::vector<int> train_pred = predict(res.classifier, train.X, o.threads);
  std::cerr << "trained " << res.classifier.num_support() << " support vectors, "
            << model_size_bytes(res.classifier) << " bytes, training accuracy "
            << accuracy(train_pred, train.y) << ", stage times " << res.diagnostics.stage1_s << " s / "
            << res.diagnostics.stage2_s << " s\n";
  return 0;
}

struct PredictOptions {
  std::string model, data, output;
  int threads = 1;
};

int run_predict(const PredictOptions &o) {
  const json j = read_json_file(o.model);
  const StandardClassifier clf = standard_classifier_from_json(j);
  std::ifstream in(o.data);
  if (!in) throw error("cannot open '" + o.data + "'");
  Dataset data = parse_libsvm(in, clf.support.cols());
  if (data.dim() != clf.support.cols())
    throw invalid_argument("data has " + std::to_string(data.dim()) + " features, model expects " +
                           std::to_string(clf.support.cols()));
  if (j.contains("scaling")) data.X = scaling_from_json(j.at("scaling")).apply(data.X);

  const std::vector<int> pred = predict(clf, data.X, o.threads);
  auto label_of = [&](int c) {
    return c < static_cast<int>(clf.class_names.size()) ? clf.class_names[static_cast<std::size_t>(c)]
                                                       : std::to_string(c);
  };
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) throw error("cannot write '" + o.output + "'");
  }
  std::ostream &out = o.output.empty() ? std::cout : file;
  for (int c : pred) out << label_of(c) << '\n';

  // Accuracy against the labels in the data file, matched by numeric value.
  if (!clf.class_names.empty()) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const std::string truth = data.class_names[static_cast<std::size_t>(data.y[i])];
      hits += std::stod(truth) == std::stod(label_of(pred[i]));
    }
    std::cerr << "accuracy " << static_cast<double>(hits) / static_cast<double>(pred.size()) << " on "
              << pred.size() << " samples\n";
  }
  return 0;
}

struct BenchOptions {
  std::string config, output;
  int trials = 0, threads = 0;
  std::optional<std::uint64_t> seed;
};

int run_bench(const BenchOptions &o) {
  json j = read_json_file(o.config);
  if (o.trials > 0) j["trials"] = o.trials;
  if (o.threads > 0) j["threads"] = o.threads;
  if (o.seed) j["base_seed"] = *o.seed;
  if (!o.output.empty()) j["output_path"] = o.output;
  const ExperimentConfig cfg = experiment_config_from_json(j);
  const std::vector<TrialRecord> records = run_experiment(cfg);

  if (cfg.output_path.empty()) {
    write_csv(records, std::cout);
  } else {
    std::ofstream out(cfg.output_path);
    if (!out) throw error("cannot write '" + cfg.output_path + "'");
    write_csv(records, out);
  }

  std::map<std::tuple<std::string, Index, Index>, std::pair<double, int>> mean;
  for (const auto &r : records) {
    auto &[sum, n] = mean[{r.method, r.n0, r.nf}];
    sum += r.accuracy;
    ++n;
  }
  for (const auto &[key, v] : mean)
    std::cerr << std::get<0>(key) << " n0=" << std::get<1>(key) << " nf=" << std::get<2>(key)
              << " mean accuracy " << v.first / v.second << " over " << v.second << " trials\n";
  return 0;
}

struct BoundOptions {
  std::string config, data, variant = "standard";
  double gamma = 1.0, rho = 1e-5;
  Index n = 20, k = 0;
  std::uint64_t seed = 0;
  bool scale = true;
};

int run_bound(const CLI::App &app, BoundOptions o) {
  const json cfg = load_config(o.config);
  from_config(app, cfg, "--data", "data_path", o.data);
  from_config(app, cfg, "--variant", "variant", o.variant);
  from_config(app, cfg, "--gamma", "gamma", o.gamma);
  from_config(app, cfg, "--rho", "rho", o.rho);
  from_config(app, cfg, "--n", "n", o.n);
  from_config(app, cfg, "--k", "k", o.k);
  from_config(app, cfg, "--seed", "seed", o.seed);
  from_config(app, cfg, "--scale", "scale", o.scale);
  if (o.data.empty()) throw invalid_argument("no data file given (--data)");

  Dataset d = load_libsvm(o.data);
  if (o.scale) d = fit_apply_unit_scaling(d, {}).second[0];
  SelectionParams p;
  p.kernel.gamma = o.gamma;
  p.rho = o.rho;
  p.seed = o.seed;
  const MapVariant variant = map_variant_from_string(o.variant);
  const Index k = o.k > 0 ? o.k : o.n;
  const StageSeeds seeds = StageSeeds::from(o.seed);
  const IndexSet idx = uniform_landmarks(d.size(), variant == MapVariant::kmeans ? d.size() : o.n, seeds.landmarks);
  const NystromMap map = fit_variant(variant, d.X, idx, o.n, k, p, seeds.stage1_map);
  const BoundCheck b = margin_bound_gap(d, map, o.rho);
  const json out = {{"N", d.size()},           {"n", o.n},
                    {"k", map.num_features()}, {"rho", o.rho},
                    {"lhs", b.lhs},            {"rhs", b.rhs},
                    {"kernel_error", b.kernel_error}, {"kappa", b.kappa},
                    {"holds", b.lhs <= b.rhs + 1e-8 * b.rhs}};
  std::cout << dump_json(out) << '\n';
  return 0;
}

struct SynthOptions {
  std::string kind = "two-gaussians", output;
  Index N = 400, d = 2, redundancy = 10;
  std::uint64_t seed = 0;
  double separation = 2.0;
};

int run_synth(const SynthOptions &o) {
  SynthSpec spec;
  spec.kind = synth_kind_from_string(o.kind);
  spec.N = o.N;
  spec.d = o.d;
  spec.seed = o.seed;
  spec.separation = o.separation;
  spec.redundancy = o.redundancy;
  const Dataset d = synth_dataset(spec);
  if (o.output.empty())
    write_libsvm(d, std::cout);
  else
    write_libsvm(d, o.output);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Supervised Nystrom kernel ridge classification"};
  app.require_subcommand(1);

  TrainOptions train;
  auto *train_cmd = app.add_subcommand("train", "Train a classifier and write the model JSON");
  train_cmd->add_option("--config", train.config, "JSON config; flags override its keys");
  train_cmd->add_option("--train", train.train, "Training data (LIBSVM format)");
  train_cmd->add_option("--model", train.model, "Output model JSON");
  train_cmd->add_option("--diagnostics", train.diagnostics, "Output diagnostics JSON");
  train_cmd->add_option("--gamma", train.gamma, "RBF kernel gamma");
  train_cmd->add_option("--rho", train.rho, "Ridge parameter");
  train_cmd->add_option("--n0", train.n0, "Stage-1 landmark count");
  train_cmd->add_option("--k0", train.k0, "Stage-1 rank (default n0)");
  train_cmd->add_option("--nf", train.nf, "Number of support vectors");
  train_cmd->add_option("--kf", train.kf, "Stage-2 rank (default nf)");
  train_cmd->add_option("--stage1", train.stage1, "standard|ensemble|rsvd|kmeans");
  train_cmd->add_option("--stage2", train.stage2, "standard|ensemble|rsvd|kmeans");
  train_cmd->add_option("--centroid-mode", train.centroid_mode, "none|inputs|outputs");
  train_cmd->add_option("--seed", train.seed, "Random seed");
  train_cmd->add_option("--scale", train.scale, "Scale features to [0,1] (true/false)");
  train_cmd->add_flag("--dedupe", train.dedupe, "Drop duplicate samples");
  train_cmd->add_flag("--unsupervised", train.unsupervised, "Train the plain Nystrom model on nf uniform landmarks");
  train_cmd->add_option("--kmeans-pool", train.kmeans_pool, "Samples fed to k-means (0 = default)");
  train_cmd->add_option("--kmeans-iters", train.kmeans_iters, "Lloyd iterations");
  train_cmd->add_option("--threads", train.threads, "Worker threads for kernel evaluation");

  PredictOptions pred;
  auto *predict_cmd = app.add_subcommand("predict", "Predict labels with a model JSON");
  predict_cmd->add_option("--model", pred.model, "Model JSON")->required();
  predict_cmd->add_option("--data", pred.data, "Data (LIBSVM format)")->required();
  predict_cmd->add_option("--output", pred.output, "Label output file (default stdout)");
  predict_cmd->add_option("--threads", pred.threads, "Worker threads");

  BenchOptions bench;
  auto *bench_cmd = app.add_subcommand("bench", "Run an experiment config and write trial CSV");
  bench_cmd->add_option("--config", bench.config, "Experiment config JSON")->required();
  bench_cmd->add_option("--output", bench.output, "CSV output (overrides output_path)");
  bench_cmd->add_option("--trials", bench.trials, "Override trial count");
  bench_cmd->add_option("--threads", bench.threads, "Override worker threads");
  bench_cmd->add_option("--seed", bench.seed, "Override base seed");

  BoundOptions bound;
  auto *bound_cmd = app.add_subcommand("bound-check", "Evaluate both sides of the margin bound");
  bound_cmd->add_option("--config", bound.config, "JSON config; flags override its keys");
  bound_cmd->add_option("--data", bound.data, "Data (LIBSVM format, N <= 5000)");
  bound_cmd->add_option("--variant", bound.variant, "standard|ensemble|rsvd|kmeans");
  bound_cmd->add_option("--gamma", bound.gamma, "RBF kernel gamma");
  bound_cmd->add_option("--rho", bound.rho, "Ridge parameter");
  bound_cmd->add_option("--n", bound.n, "Landmark count");
  bound_cmd->add_option("--k", bound.k, "Rank (default n)");
  bound_cmd->add_option("--seed", bound.seed, "Random seed");
  bound_cmd->add_option("--scale", bound.scale, "Scale features to [0,1] (true/false)");

  SynthOptions synth;
  auto *synth_cmd = app.add_subcommand("synth", "Write a synthetic data set in LIBSVM format");
  synth_cmd->add_option("--kind", synth.kind, "two-gaussians|ring-vs-blob|redundant");
  synth_cmd->add_option("--N", synth.N, "Sample count");
  synth_cmd->add_option("--d", synth.d, "Dimension");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--separation", synth.separation, "Class mean distance in sigmas");
  synth_cmd->add_option("--redundancy", synth.redundancy, "Copies per point (redundant kind)");
  synth_cmd->add_option("--output", synth.output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(*train_cmd, train);
    if (*predict_cmd) return run_predict(pred);
    if (*bench_cmd) return run_bench(bench);
    if (*bound_cmd) return run_bound(*bound_cmd, bound);
    if (*synth_cmd) return run_synth(synth);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
