#pragma once

#include "supnys/data.hpp"
#include "supnys/json_io.hpp"
#include "supnys/ridge.hpp"
#include "supnys/selection.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace supnys {

enum class SynthKind { two_gaussians, ring_vs_blob, redundant };

std::string to_string(SynthKind k);
SynthKind synth_kind_from_string(const std::string &name);

struct SynthSpec {
  SynthKind kind = SynthKind::two_gaussians;
  Index N = 400;
  Index d = 2;
  std::uint64_t seed = 0;
  /// Distance between the two class means in units of the noise sigma.
  double separation = 2.0;
  /// Copies of each base point for the redundant kind.
  Index redundancy = 10;
};

/// Binary synthetic data sets. two-gaussians: unit-variance classes whose
/// means differ by `separation` along the first axis. ring-vs-blob: a blob at
/// the origin inside a ring of radius 3 (first two axes). redundant:
/// two-gaussians over N / redundancy base points, each repeated redundancy
/// times.
Dataset synth_dataset(const SynthSpec &spec);

/// 8 (n d + n L + L): support points, A and b as 8-byte floats.
std::uint64_t model_size_bytes(const StandardClassifier &clf);

struct TrialRecord {
  std::string method;
  Index n0 = 0;
  Index k0 = 0;
  Index nf = 0;
  Index kf = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double stage1_s = 0.0;
  double stage2_s = 0.0;
  std::uint64_t model_bytes = 0;
  /// Wall time of the whole trial; not part of the CSV.
  double total_s = 0.0;
};

inline constexpr const char *kCsvHeader =
    "method,n0,k0,nf,kf,seed,accuracy,stage1_s,stage2_s,model_bytes";

void write_csv(const std::vector<TrialRecord> &records, std::ostream &out);
std::vector<TrialRecord> read_csv(std::istream &in);

struct GridPoint {
  Index n0 = 0;
  Index nf = 0;
};

struct ExperimentConfig {
  // Data: either files or a synthetic spec.
  std::string train_path;
  std::string test_path;
  std::optional<SynthSpec> synth;
  double test_fraction = 0.2;
  bool scale = true;
  bool dedupe = false;

  double gamma = 1.0;
  double rho = 1e-5;
  std::vector<std::string> methods{"Nys", "Nys+"};
  std::vector<GridPoint> grid{{100, 20}};
  int trials = 30;
  std::uint64_t base_seed = 0;
  std::string output_path;

  Index ensemble_experts = 5;
  Index rsvd_oversample = 10;
  int rsvd_power = 2;
  int kmeans_iters = 10;
  Index kmeans_pool = 0;
  CentroidMode knys_plus_mode = CentroidMode::outputs;
  int threads = 1;
  bool warmup = true;

  void validate() const;
};

/// Accepted method names.
const std::vector<std::string> &known_methods();

ExperimentConfig experiment_config_from_json(const json &j);
json to_json(const ExperimentConfig &cfg);

/// Loads or generates the data, then runs every (method, grid point, trial).
/// Trial t uses seed base_seed + t for its split and every random stream, so
/// supervised and unsupervised rows with equal seed are paired. Unsupervised
/// methods run once per distinct nf and record n0 = k0 = 0.
std::vector<TrialRecord> run_experiment(const ExperimentConfig &cfg);

/// Runs one method on a fixed train/test pair.
TrialRecord run_method(const std::string &method, const GridPoint &g, const Dataset &train,
                       const Dataset &test, const ExperimentConfig &cfg, std::uint64_t seed);

/// Splits/scales data for trial `seed` as run_experiment does.
std::pair<Dataset, Dataset> prepare_trial_data(const ExperimentConfig &cfg, const Dataset &train,
                                               const std::optional<Dataset> &test,
                                               std::uint64_t seed);

/// Loads the configured training and optional test files (or generates the
/// synthetic set), applying dedupe when configured.
std::pair<Dataset, std::optional<Dataset>> load_experiment_data(const ExperimentConfig &cfg);

}  // namespace supnys
