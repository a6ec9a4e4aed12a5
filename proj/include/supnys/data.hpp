#pragma once

#include "supnys/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace supnys {

/// Dense labelled data set. Rows of X are samples; y holds contiguous class
/// ids in [0, num_classes). class_names[c] is the original label text of
/// class c.
struct Dataset {
  Points X;
  std::vector<int> y;
  int num_classes = 0;
  std::vector<std::string> class_names;
  bool scaled = false;

  Index size() const { return X.rows(); }
  Index dim() const { return X.cols(); }

  /// Rows selected by idx, in the given order. Labels and class map are kept.
  Dataset subset(const IndexSet &idx) const;

  /// Throws invalid_argument if an invariant is broken.
  void validate() const;
};

/// Per-feature range observed on the fit split.
struct ScalingParams {
  Vector min;
  Vector max;

  /// Affine map to [0,1] followed by clamping. Constant features map to 0.
  Points apply(const Points &X) const;
};

Dataset load_libsvm(const std::filesystem::path &path);

/// Parses LIBSVM text. min_dim pads the feature count (useful when the test
/// file lacks the highest feature index of the training file).
Dataset parse_libsvm(std::istream &in, Index min_dim = 0);

/// Writes zero entries sparsely (omitted) and values with 17 significant
/// digits, so load_libsvm reproduces X and y exactly.
void write_libsvm(const Dataset &d, std::ostream &out);
void write_libsvm(const Dataset &d, const std::filesystem::path &path);

/// Aligns the class maps of two independently loaded splits so that equal
/// label strings get equal ids. Both data sets are relabelled in place.
void unify_labels(Dataset &a, Dataset &b);

ScalingParams fit_scaling(const Points &X);

/// Fits on train, applies to train and every other split.
std::pair<ScalingParams, std::vector<Dataset>> fit_apply_unit_scaling(
    const Dataset &train, const std::vector<Dataset> &others);

/// Removes exact duplicate (x, y) rows, keeping first occurrences in order.
Dataset dedupe(const Dataset &d);

/// Seeded random partition. Test side gets round(test_fraction * N) rows.
std::pair<Dataset, Dataset> split(const Dataset &d, double test_fraction,
                                  std::uint64_t seed);

}  // namespace supnys
