#pragma once

#include "supnys/types.hpp"

#include <string>

namespace supnys {

enum class KernelKind { rbf };

struct KernelConfig {
  KernelKind kind = KernelKind::rbf;
  double gamma = 1.0;

  void validate() const;
};

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string &name);

/// exp(-gamma * ||x - z||^2)
double rbf(const Eigen::Ref<const Vector> &x, const Eigen::Ref<const Vector> &z,
           double gamma);

/// Kernel block M(i, j) = K(rows_i, cols_j). Each entry is computed with a
/// fixed summation order, so the result does not depend on `threads`.
Matrix gram(const Points &rows, const Points &cols, const KernelConfig &cfg,
            int threads = 1);

/// Upper bound on K(x, x).
double kappa(const KernelConfig &cfg);

}  // namespace supnys
