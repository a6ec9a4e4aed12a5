#include "doctest.h"

#include "oracles.hpp"

#include "supnys/error.hpp"
#include "supnys/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace supnys;

TEST_CASE("rbf closed forms") {
  Vector x(2), z(2);
  x << 0, 0;
  z << 1, 0;
  CHECK(rbf(x, x, 1.0) == 1.0);
  CHECK(rbf(x, z, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(rbf(x, z, 1.0) == doctest::Approx(0.367879).epsilon(1e-6));

  // USPS bandwidth with squared distance 100.
  Vector a = Vector::Zero(4), b(4);
  b << 5, 5, 5, 5;
  CHECK(rbf(a, b, 0.01) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  Vector short_v(1);
  CHECK_THROWS_AS(rbf(x, short_v, 1.0), invalid_argument);
}

TEST_CASE("gram: shapes, symmetry, unit diagonal") {
  std::mt19937_64 rng(1);
  KernelConfig cfg{KernelKind::rbf, 2.0};
  const Points one = oracle::random_points(1, 3, rng);
  CHECK(gram(one, one, cfg) == Matrix::Ones(1, 1));

  const Points S = oracle::random_points(3, 4, rng);
  const Matrix M = gram(S, S, cfg);
  CHECK(M.rows() == 3);
  CHECK(M == M.transpose());
  CHECK(M.diagonal() == Vector::Ones(3));

  // Separate copies of the same points give the same exact properties.
  const Points copy = S;
  CHECK(gram(S, copy, cfg) == M);
}

TEST_CASE("gram: 3x2 block matches elementwise oracle") {
  std::mt19937_64 rng(2);
  KernelConfig cfg{KernelKind::rbf, 0.7};
  const Points R = oracle::random_points(3, 5, rng), C = oracle::random_points(2, 5, rng);
  const Matrix M = gram(R, C, cfg);
  const Matrix ref = oracle::rbf_gram(R, C, cfg.gamma);
  REQUIRE(M.rows() == 3);
  REQUIRE(M.cols() == 2);
  CHECK((M - ref).cwiseAbs().maxCoeff() < 1e-14);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j) CHECK(M(i, j) == rbf(R.row(i).transpose(), C.row(j).transpose(), cfg.gamma));
}

TEST_CASE("gram: entries in (0,1], PSD on random sets") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 50 + 30 * trial;
    KernelConfig cfg{KernelKind::rbf, 0.5 + trial};
    const Points S = oracle::random_points(n, 6, rng);
    const Matrix M = gram(S, S, cfg);
    CHECK(M.minCoeff() > 0.0);
    CHECK(M.maxCoeff() <= 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
    const double norm2 = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * norm2);
  }
}

TEST_CASE("gram: permutation equivariance") {
  std::mt19937_64 rng(4);
  KernelConfig cfg{KernelKind::rbf, 1.3};
  const Points R = oracle::random_points(20, 3, rng), C = oracle::random_points(7, 3, rng);
  const Matrix M = gram(R, C, cfg);
  std::vector<Index> perm(20);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  Points RP(20, 3);
  for (Index i = 0; i < 20; ++i) RP.row(i) = R.row(perm[i]);
  const Matrix MP = gram(RP, C, cfg);
  for (Index i = 0; i < 20; ++i) CHECK(MP.row(i) == M.row(perm[i]));
}

TEST_CASE("gram: parallel and serial are bitwise identical") {
  std::mt19937_64 rng(5);
  KernelConfig cfg{KernelKind::rbf, 0.9};
  const Points R = oracle::random_points(101, 13, rng), C = oracle::random_points(37, 13, rng);
  const Matrix serial = gram(R, C, cfg, 1);
  for (int threads : {2, 3, 8}) CHECK(gram(R, C, cfg, threads) == serial);
}

TEST_CASE("gram: errors and degenerate sizes") {
  KernelConfig cfg{KernelKind::rbf, 1.0};
  CHECK_THROWS_AS(gram(Points::Zero(2, 3), Points::Zero(2, 4), cfg), invalid_argument);
  CHECK_THROWS_AS(gram(Points::Zero(2, 3), Points::Zero(2, 3), KernelConfig{KernelKind::rbf, 0.0}),
                  invalid_argument);
  CHECK(gram(Points::Zero(0, 3), Points::Zero(2, 3), cfg).rows() == 0);
}

TEST_CASE("kappa bounds every diagonal") {
  for (double g : {0.001, 0.01, 1.0, 50.0}) CHECK(kappa({KernelKind::rbf, g}) == 1.0);
  std::mt19937_64 rng(6);
  KernelConfig cfg{KernelKind::rbf, 0.001};
  const Points S = oracle::random_points(30, 4, rng, -100, 100);
  CHECK(gram(S, S, cfg).diagonal().maxCoeff() <= kappa(cfg));
}

TEST_CASE("kernel kind names round trip") {
  CHECK(kernel_kind_from_string(to_string(KernelKind::rbf)) == KernelKind::rbf);
  CHECK_THROWS_AS(kernel_kind_from_string("poly"), invalid_argument);
}
