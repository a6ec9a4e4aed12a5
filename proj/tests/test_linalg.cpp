#include "doctest.h"

#include "oracles.hpp"

#include "supnys/error.hpp"
#include "supnys/linalg.hpp"

using namespace supnys;

namespace {

double orthonormality_error(const Matrix &U) {
  return (U.transpose() * U - Matrix::Identity(U.cols(), U.cols())).cwiseAbs().maxCoeff();
}

bool nonincreasing(const Vector &v) {
  for (Index i = 1; i < v.size(); ++i)
    if (v(i) > v(i - 1)) return false;
  return true;
}

}  // namespace

TEST_CASE("compact_eig_psd: small exact cases") {
  const CompactFactor id = compact_eig_psd(Matrix::Identity(2, 2), 2);
  CHECK(id.sigma.isApprox(Vector::Ones(2)));
  CHECK(orthonormality_error(id.U) < 1e-12);

  Matrix B = Matrix::Zero(2, 2);
  B(0, 0) = 4;
  B(1, 1) = 1;
  const CompactFactor top = compact_eig_psd(B, 1);
  REQUIRE(top.rank() == 1);
  CHECK(top.sigma(0) == doctest::Approx(4.0));
  CHECK(std::abs(std::abs(top.U(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(top.U(1, 0)) < 1e-12);
}

TEST_CASE("compact_eig_psd: Eckart-Young against a Jacobi SVD oracle") {
  std::mt19937_64 rng(11);
  for (Index n : {Index{20}, Index{60}, Index{100}}) {
    const Matrix B = oracle::random_psd(n, n, rng);
    const Vector spectrum = oracle::psd_spectrum(B);
    for (Index k : {Index{1}, Index{5}, n / 2}) {
      const CompactFactor f = compact_eig_psd(B, k);
      REQUIRE(f.rank() == k);
      CHECK(orthonormality_error(f.U) < 1e-8);
      CHECK(nonincreasing(f.sigma));
      CHECK(f.sigma.minCoeff() > 0.0);
      const double err = oracle::spectral_norm(B - f.reconstruct());
      CHECK(err == doctest::Approx(spectrum(k)).epsilon(1e-6));
    }
  }
}

TEST_CASE("compact_eig_psd: drops numerically zero eigenvalues") {
  std::mt19937_64 rng(12);
  const Matrix B = oracle::random_psd(30, 4, rng);
  const CompactFactor f = compact_eig_psd(B, 30);
  CHECK(f.rank() == 4);
  CHECK((B - f.reconstruct()).norm() < 1e-9 * B.norm());
  CHECK(compact_eig_psd(Matrix::Zero(3, 3), 3).rank() == 0);
}

TEST_CASE("compact_eig_psd: errors") {
  Matrix B = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(compact_eig_psd(B, 0), invalid_argument);
  B(0, 1) = 1e-3;
  CHECK_THROWS_AS(compact_eig_psd(B, 1), invalid_argument);
  CHECK_THROWS_AS(compact_eig_psd(Matrix::Zero(2, 3), 1), invalid_argument);
}

TEST_CASE("randomized_eig_psd: exact low rank recovery") {
  Matrix B = Matrix::Zero(3, 3);
  B(0, 0) = 4;
  B(1, 1) = 1;
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const CompactFactor f = randomized_eig_psd(B, 1, 2, 2, seed);
    REQUIRE(f.rank() == 1);
    CHECK(std::abs(f.sigma(0) - 4.0) < 1e-6);
  }
}

TEST_CASE("randomized_eig_psd: deterministic given seed") {
  std::mt19937_64 rng(13);
  const Matrix B = oracle::random_psd(50, 50, rng);
  const CompactFactor a = randomized_eig_psd(B, 10, 10, 2, 5);
  const CompactFactor b = randomized_eig_psd(B, 10, 10, 2, 5);
  CHECK(a.U == b.U);
  CHECK(a.sigma == b.sigma);
  CHECK(orthonormality_error(a.U) < 1e-8);
  CHECK(nonincreasing(a.sigma));
}

TEST_CASE("randomized_eig_psd: 200x200 tail bound against dense oracle") {
  std::mt19937_64 rng(14);
  const Matrix B = oracle::random_psd(200, 200, rng);
  const Vector spectrum = oracle::psd_spectrum(B);
  const CompactFactor f = randomized_eig_psd(B, 20, 10, 2, 2024);
  REQUIRE(f.rank() == 20);
  const double err = oracle::spectral_norm(B - f.reconstruct());
  CHECK(err <= 10.0 * (spectrum(20) + 1e-12));
}

TEST_CASE("randomized_eig_psd: errors") {
  CHECK_THROWS_AS(randomized_eig_psd(Matrix::Identity(5, 5), 3, 3, 2, 0), invalid_argument);
  CHECK_THROWS_AS(randomized_eig_psd(Matrix::Identity(5, 5), 0, 1, 2, 0), invalid_argument);
}

TEST_CASE("whitening_map") {
  std::mt19937_64 rng(15);
  CompactFactor unit{compact_eig_psd(oracle::random_psd(6, 6, rng), 6).U, Vector::Ones(6)};
  CHECK(whitening_map(unit) == unit.U);

  CompactFactor one{Matrix::Zero(2, 1), Vector::Constant(1, 4.0)};
  one.U(0, 0) = 1.0;
  const Matrix A = whitening_map(one);
  CHECK(A(0, 0) == 0.5);
  CHECK(A(1, 0) == 0.0);

  for (int t = 0; t < 5; ++t) {
    const Matrix B = oracle::random_psd(25, 10, rng);
    const CompactFactor f = compact_eig_psd(B, 10);
    const Matrix W = whitening_map(f);
    const Matrix I = W.transpose() * f.reconstruct() * W;
    CHECK((I - Matrix::Identity(f.rank(), f.rank())).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("spectral_norm") {
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 3;
  D(1, 1) = 1;
  CHECK(spectral_norm(D, 200, 0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(spectral_norm(Matrix::Identity(4, 4), 10, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_norm(Matrix::Zero(3, 3), 10, 0) == 0.0);

  std::mt19937_64 rng(16);
  for (int t = 0; t < 5; ++t) {
    const Matrix M = oracle::random_symmetric(50, rng);
    const double ref = oracle::spectral_norm(M);
    CHECK(std::abs(spectral_norm(M, 5000, static_cast<std::uint64_t>(t)) - ref) <= 1e-4 * ref);
  }
  const Matrix M = oracle::random_symmetric(20, rng);
  CHECK(spectral_norm(M, 50, 3) == spectral_norm(M, 50, 3));
}

namespace {

struct RidgeProblem {
  Matrix Phi;
  Matrix Y;
};

RidgeProblem random_problem(Index D, Index N, Index L, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal;
  RidgeProblem p{Matrix(D, N), Matrix(N, L)};
  for (Index i = 0; i < D; ++i)
    for (Index j = 0; j < N; ++j) p.Phi(i, j) = normal(rng);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < L; ++j) p.Y(i, j) = normal(rng);
  return p;
}

Vector pack(const Matrix &W, const Vector &b) {
  Vector x(W.size() + b.size());
  x << Eigen::Map<const Vector>(W.data(), W.size()), b;
  return x;
}

}  // namespace

TEST_CASE("solve_ridge: zero targets") {
  std::mt19937_64 rng(17);
  const auto p = random_problem(4, 12, 3, rng);
  const RidgeSolution s = solve_ridge(p.Phi, Matrix::Zero(12, 3), 1e-5);
  CHECK(s.W.isZero());
  CHECK(s.b.isZero());
}

TEST_CASE("solve_ridge: huge rho shrinks W and leaves b at the target means") {
  std::mt19937_64 rng(18);
  const auto p = random_problem(6, 40, 2, rng);
  const RidgeSolution s = solve_ridge(p.Phi, p.Y, 1e9);
  const Matrix Pc = p.Phi.colwise() - p.Phi.rowwise().mean();
  const Matrix Yc = p.Y.rowwise() - p.Y.colwise().mean();
  CHECK(s.W.norm() <= 1e-6 * (Pc * Yc).norm());
  CHECK((s.b - p.Y.colwise().mean().transpose()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("solve_ridge: finite-difference gradient vanishes at the solution") {
  std::mt19937_64 rng(19);
  const double rho = 1e-5;
  for (auto [D, N] : {std::pair<Index, Index>{10, 30}, {30, 10}}) {
    const auto p = random_problem(D, N, 2, rng);
    const RidgeSolution s = solve_ridge(p.Phi, p.Y, rho);
    const auto f = [&](const Vector &x) {
      const Matrix W = Eigen::Map<const Matrix>(x.data(), D, 2);
      const Vector b = x.tail(2);
      return ridge_objective(p.Phi, p.Y, rho, W, b);
    };
    const Vector g = oracle::fd_gradient(f, pack(s.W, s.b), 1e-4);
    CHECK(g.norm() <= 1e-8 * p.Y.norm());
  }
}

TEST_CASE("solve_ridge: normal-equation residual") {
  std::mt19937_64 rng(20);
  const auto p = random_problem(15, 80, 3, rng);
  const double rho = 1e-5;
  const RidgeSolution s = solve_ridge(p.Phi, p.Y, rho);
  const Matrix Pc = p.Phi.colwise() - p.Phi.rowwise().mean();
  const Matrix Yc = p.Y.rowwise() - p.Y.colwise().mean();
  const Matrix G = Pc * Pc.transpose() + rho * Matrix::Identity(15, 15);
  CHECK((G * s.W - Pc * Yc).norm() <= 1e-8 * (Pc * Yc).norm());
}

TEST_CASE("solve_ridge: optimality against random perturbations") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  const auto p = random_problem(8, 25, 3, rng);
  const double rho = 1e-2;
  const RidgeSolution s = solve_ridge(p.Phi, p.Y, rho);
  const double best = ridge_objective(p.Phi, p.Y, rho, s.W, s.b);
  for (int t = 0; t < 100; ++t) {
    Matrix dW(8, 3);
    Vector db(3);
    for (Index i = 0; i < dW.size(); ++i) dW.data()[i] = normal(rng);
    for (Index i = 0; i < 3; ++i) db(i) = normal(rng);
    const double scale = 1e-3 / std::sqrt(dW.squaredNorm() + db.squaredNorm());
    CHECK(best <= ridge_objective(p.Phi, p.Y, rho, s.W + scale * dW, s.b + scale * db));
  }
}

TEST_CASE("solve_ridge: constant target shift moves only the bias") {
  std::mt19937_64 rng(22);
  for (auto [D, N] : {std::pair<Index, Index>{5, 20}, {20, 5}}) {
    const auto p = random_problem(D, N, 2, rng);
    const RidgeSolution a = solve_ridge(p.Phi, p.Y, 1e-3);
    const RidgeSolution b = solve_ridge(p.Phi, p.Y.array() + 2.5, 1e-3);
    CHECK((a.W - b.W).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(((b.b - a.b).array() - 2.5).abs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("solve_ridge: primal and push-through routes agree") {
  std::mt19937_64 rng(23);
  const auto p = random_problem(12, 12, 2, rng);
  // D == N takes the D x D route; compare with an explicit N x N dual solve.
  const RidgeSolution s = solve_ridge(p.Phi, p.Y, 1e-2);
  const Matrix Pc = p.Phi.colwise() - p.Phi.rowwise().mean();
  const Matrix Yc = p.Y.rowwise() - p.Y.colwise().mean();
  const Matrix Wd = Pc * (Pc.transpose() * Pc + 1e-2 * Matrix::Identity(12, 12)).ldlt().solve(Yc);
  CHECK((s.W - Wd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("solve_ridge: errors") {
  CHECK_THROWS_AS(solve_ridge(Matrix::Ones(2, 3), Matrix::Ones(3, 1), 0.0), invalid_argument);
  CHECK_THROWS_AS(solve_ridge(Matrix::Ones(2, 3), Matrix::Ones(4, 1), 1.0), invalid_argument);
}
