#pragma once

#include "supnys/types.hpp"

#include <cstdint>

namespace supnys {

/// Compact eigendecomposition U diag(sigma) U^T of a symmetric PSD matrix.
/// U has orthonormal columns; sigma is strictly positive and nonincreasing.
struct CompactFactor {
  Matrix U;
  Vector sigma;

  Index rank() const { return sigma.size(); }
  Matrix reconstruct() const;
};

/// Relative cutoff for the truncated pseudoinverse.
inline constexpr double kPinvRelTol = 1e-12;

/// Top-min(k, numerical rank) eigenpairs of B. Eigenvalues at or below
/// rel_tol * max eigenvalue are dropped.
CompactFactor compact_eig_psd(const Matrix &B, Index k, double rel_tol = kPinvRelTol);

/// Randomized range finder with (k + oversample) Gaussian probes and `power`
/// subspace iterations, followed by a Rayleigh-Ritz step.
CompactFactor randomized_eig_psd(const Matrix &B, Index k, Index oversample, int power,
                                 std::uint64_t seed, double rel_tol = kPinvRelTol);

/// U * diag(sigma)^{-1/2}
Matrix whitening_map(const CompactFactor &f);

/// Largest singular value by power iteration on M^T M, started from a seeded
/// Gaussian vector. Stops early once the estimate is stationary.
double spectral_norm(const Matrix &M, int iters, std::uint64_t seed);

struct RidgeSolution {
  Matrix W;  // D x L
  Vector b;  // L
};

/// Minimizes ||Phi^T W + 1 b^T - Y||_F^2 + rho ||W||_F^2 with b unpenalized.
/// Phi is D x N (one column per sample), Y is N x L.
RidgeSolution solve_ridge(const Matrix &Phi, const Matrix &Y, double rho);

/// Objective value of the ridge problem above.
double ridge_objective(const Matrix &Phi, const Matrix &Y, double rho,
                       const Matrix &W, const Vector &b);

}  // namespace supnys
