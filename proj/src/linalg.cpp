#include "supnys/linalg.hpp"

#include "supnys/error.hpp"
#include "supnys/rng.hpp"

#include <algorithm>
#include <cmath>

namespace supnys {

Matrix CompactFactor::reconstruct() const {
  return U * sigma.asDiagonal() * U.transpose();
}

namespace {

void check_symmetric(const Matrix &B) {
  if (B.rows() != B.cols()) throw invalid_argument("matrix is not square");
  if (!B.allFinite()) throw invalid_argument("matrix has non-finite entries");
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw invalid_argument("matrix is not symmetric");
}

// Keeps the top `k` eigenpairs of an ascending eigen-solver result whose
// eigenvalues exceed rel_tol * largest.
CompactFactor truncate(const Vector &evals_asc, const Matrix &evecs, Index k, double rel_tol) {
  const Index n = evals_asc.size();
  CompactFactor f;
  const double top = n > 0 ? evals_asc(n - 1) : 0.0;
  if (!(top > 0.0)) {
    f.U.resize(evecs.rows(), 0);
    f.sigma.resize(0);
    return f;
  }
  Index r = 0;
  while (r < std::min(k, n) && evals_asc(n - 1 - r) > rel_tol * top) ++r;
  f.U.resize(evecs.rows(), r);
  f.sigma.resize(r);
  for (Index i = 0; i < r; ++i) {
    f.sigma(i) = evals_asc(n - 1 - i);
    f.U.col(i) = evecs.col(n - 1 - i);
  }
  return f;
}

Matrix orthonormal_basis(const Matrix &Y) {
  Eigen::HouseholderQR<Matrix> qr(Y);
  return qr.householderQ() * Matrix::Identity(Y.rows(), Y.cols());
}

}  // namespace

CompactFactor compact_eig_psd(const Matrix &B, Index k, double rel_tol) {
  if (k < 1) throw invalid_argument("target rank must be at least 1");
  check_symmetric(B);
  Eigen::SelfAdjointEigenSolver<Matrix> es(B);
  if (es.info() != Eigen::Success) throw error("eigendecomposition failed");
  return truncate(es.eigenvalues(), es.eigenvectors(), k, rel_tol);
}

CompactFactor randomized_eig_psd(const Matrix &B, Index k, Index oversample, int power,
                                 std::uint64_t seed, double rel_tol) {
  if (k < 1) throw invalid_argument("target rank must be at least 1");
  if (oversample < 0 || power < 0) throw invalid_argument("oversample and power must be >= 0");
  check_symmetric(B);
  const Index n = B.rows();
  if (k + oversample > n)
    throw invalid_argument("k + oversample exceeds the matrix size");

  Rng rng(seed);
  const Matrix omega = gaussian_matrix(n, k + oversample, rng);
  Matrix Q = orthonormal_basis(B * omega);
  for (int it = 0; it < power; ++it) Q = orthonormal_basis(B * Q);

  Matrix T = Q.transpose() * B * Q;
  T = 0.5 * (T + T.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(T);
  if (es.info() != Eigen::Success) throw error("eigendecomposition failed");
  CompactFactor small = truncate(es.eigenvalues(), es.eigenvectors(), k, rel_tol);
  return {Q * small.U, small.sigma};
}

Matrix whitening_map(const CompactFactor &f) {
  return f.U * f.sigma.cwiseSqrt().cwiseInverse().asDiagonal();
}

double spectral_norm(const Matrix &M, int iters, std::uint64_t seed) {
  if (!M.allFinite()) throw invalid_argument("spectral_norm: non-finite matrix");
  if (M.size() == 0) return 0.0;
  Rng rng(seed);
  Vector v = gaussian_matrix(M.cols(), 1, rng);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < std::max(iters, 1); ++it) {
    const Vector Mv = M * v;
    const double next = Mv.norm();
    if (next == 0.0) return 0.0;
    Vector w = M.transpose() * Mv;
    const double wn = w.norm();
    if (wn == 0.0) return next;
    v = w / wn;
    if (std::abs(next - estimate) <= 1e-15 * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return (M * v).norm();
}

RidgeSolution solve_ridge(const Matrix &Phi, const Matrix &Y, double rho) {
  if (!(rho > 0.0)) throw invalid_argument("ridge rho must be positive");
  if (Phi.cols() != Y.rows()) throw invalid_argument("solve_ridge: sample count mismatch");
  if (!Phi.allFinite() || !Y.allFinite()) throw invalid_argument("solve_ridge: non-finite input");
  const Index D = Phi.rows(), N = Phi.cols();
  if (N < 1) throw invalid_argument("solve_ridge: no samples");

  const Vector phi_mean = Phi.rowwise().mean();
  const Vector y_mean = Y.colwise().mean().transpose();
  const Matrix Pc = Phi.colwise() - phi_mean;
  const Matrix Yc = Y.rowwise() - y_mean.transpose();

  RidgeSolution s;
  if (D <= N) {
    Matrix G = Matrix::Identity(D, D) * rho;
    G.selfadjointView<Eigen::Lower>().rankUpdate(Pc);
    G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
    const Matrix rhs = Pc * Yc;
    Eigen::LDLT<Matrix> ldlt(G);
    s.W = ldlt.solve(rhs);
    // One step of iterative refinement.
    s.W += ldlt.solve(rhs - G * s.W);
  } else {
    // Push-through identity: (Pc Pc^T + rho I)^-1 Pc = Pc (Pc^T Pc + rho I)^-1.
    Matrix G = Matrix::Identity(N, N) * rho;
    G.noalias() += Pc.transpose() * Pc;
    Eigen::LDLT<Matrix> ldlt(G);
    Matrix alpha = ldlt.solve(Yc);
    alpha += ldlt.solve(Yc - G * alpha);
    s.W = Pc * alpha;
  }
  s.b = y_mean - s.W.transpose() * phi_mean;
  return s;
}

double ridge_objective(const Matrix &Phi, const Matrix &Y, double rho, const Matrix &W,
                       const Vector &b) {
  const Matrix R = (Phi.transpose() * W).rowwise() + b.transpose() - Y;
  return R.squaredNorm() + rho * W.squaredNorm();
}

}  // namespace supnys
