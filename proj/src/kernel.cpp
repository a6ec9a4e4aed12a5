#include "supnys/kernel.hpp"

#include "supnys/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace supnys {

void KernelConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw invalid_argument("kernel gamma must be positive");
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::rbf: return "rbf";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(const std::string &name) {
  if (name == "rbf" || name == "RBF") return KernelKind::rbf;
  throw invalid_argument("unknown kernel kind '" + name + "'");
}

namespace {

// Plain loop: the summation order is fixed regardless of alignment.
double dot(const double *a, const double *b, Index d) {
  double s = 0.0;
  for (Index t = 0; t < d; ++t) s += a[t] * b[t];
  return s;
}

double squared_distance(double xx, double zz, double xz) {
  return std::max(0.0, xx + zz - 2.0 * xz);
}

}  // namespace

double rbf(const Eigen::Ref<const Vector> &x, const Eigen::Ref<const Vector> &z,
           double gamma) {
  if (x.size() != z.size()) throw invalid_argument("rbf: dimension mismatch");
  const Vector xc = x, zc = z;
  const Index d = xc.size();
  const double xz = dot(xc.data(), zc.data(), d);
  const double xx = dot(xc.data(), xc.data(), d);
  const double zz = dot(zc.data(), zc.data(), d);
  return std::exp(-gamma * squared_distance(xx, zz, xz));
}

Matrix gram(const Points &rows, const Points &cols, const KernelConfig &cfg,
            int threads) {
  cfg.validate();
  if (rows.cols() != cols.cols()) throw invalid_argument("gram: dimension mismatch");
  const Index n = rows.rows(), m = cols.rows(), d = rows.cols();
  Matrix M(n, m);
  if (n == 0 || m == 0) return M;

  std::vector<double> row_norm(static_cast<std::size_t>(n)), col_norm(static_cast<std::size_t>(m));
  for (Index i = 0; i < n; ++i) row_norm[i] = dot(rows.row(i).data(), rows.row(i).data(), d);
  for (Index j = 0; j < m; ++j) col_norm[j] = dot(cols.row(j).data(), cols.row(j).data(), d);

  // x.x + x.x - 2 x.x is exactly 0 and dot is symmetric in its arguments, so
  // rows == cols yields an exactly symmetric, unit-diagonal block.
  auto fill = [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      const double *xi = rows.row(i).data();
      for (Index j = 0; j < m; ++j) {
        const double xz = dot(xi, cols.row(j).data(), d);
        M(i, j) = std::exp(-cfg.gamma * squared_distance(row_norm[i], col_norm[j], xz));
      }
    }
  };

  const Index workers = std::clamp<Index>(threads, 1, n);
  if (workers == 1) {
    fill(0, n);
  } else {
    std::vector<std::thread> pool;
    const Index chunk = (n + workers - 1) / workers;
    for (Index w = 0; w < workers; ++w) {
      const Index b = w * chunk, e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(fill, b, e);
    }
    for (auto &t : pool) t.join();
  }
  return M;
}

double kappa(const KernelConfig &cfg) {
  switch (cfg.kind) {
    case KernelKind::rbf: return 1.0;
  }
  return 1.0;
}

}  // namespace supnys
