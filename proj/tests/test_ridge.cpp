#include "doctest.h"

#include "oracles.hpp"

#include "supnys/error.hpp"
#include "supnys/json_io.hpp"
#include "supnys/linalg.hpp"
#include "supnys/nystrom.hpp"
#include "supnys/ridge.hpp"

#include <numeric>

using namespace supnys;

namespace {

std::vector<int> labels_from(const Points &X, int L) {
  std::vector<int> y(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    const double s = X(i, 0) + 0.5 * X(i, 1);
    y[static_cast<std::size_t>(i)] = std::min(L - 1, static_cast<int>(s * L / 1.5));
  }
  return y;
}

IndexSet iota(Index n) {
  IndexSet s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), Index{0});
  return s;
}

}  // namespace

TEST_CASE("one_vs_rest_targets uses +1/-1") {
  const Matrix Y = one_vs_rest_targets({0, 2, 1}, 3);
  Matrix ref(3, 3);
  ref << 1, -1, -1, -1, -1, 1, -1, 1, -1;
  CHECK(Y == ref);
  CHECK_THROWS_AS(one_vs_rest_targets({0, 3}, 3), invalid_argument);
}

TEST_CASE("train_ovr: binary columns are negatives") {
  std::mt19937_64 rng(70);
  const Matrix Phi = oracle::random_points(40, 6, rng).transpose();
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) y[i] = i % 3 == 0 ? 1 : 0;
  const RidgeModel m = train_ovr(Phi, y, 2, 1e-3);
  CHECK((m.W.col(0) + m.W.col(1)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.b(0) + m.b(1) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("train_ovr: zero features give class-mean biases") {
  const Matrix Phi = Matrix::Zero(4, 6);
  const RidgeModel m = train_ovr(Phi, {0, 0, 0, 1, 1, 2}, 3, 1e-5);
  CHECK(m.W.isZero(0.0));
  CHECK(m.b(0) == doctest::Approx(0.0));
  CHECK(m.b(1) == doctest::Approx(-1.0 / 3.0));
  CHECK(m.b(2) == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("train_ovr: each column is an independent binary solve") {
  std::mt19937_64 rng(71);
  const Points X = oracle::random_points(60, 5, rng);
  const std::vector<int> y = labels_from(X, 3);
  const Matrix Phi = X.transpose();
  const RidgeModel m = train_ovr(Phi, y, 3, 1e-2);
  for (int c = 0; c < 3; ++c) {
    Matrix yc(60, 1);
    for (int i = 0; i < 60; ++i) yc(i, 0) = y[i] == c ? 1.0 : -1.0;
    const RidgeSolution s = solve_ridge(Phi, yc, 1e-2);
    CHECK((m.W.col(c) - s.W.col(0)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(m.b(c) == doctest::Approx(s.b(0)).epsilon(1e-10));
  }
}

TEST_CASE("train_ovr: errors") {
  const Matrix Phi = Matrix::Ones(2, 3);
  CHECK_THROWS_AS(train_ovr(Phi, {1, 1, 1}, 2, 1e-5), invalid_argument);
  CHECK_THROWS_AS(train_ovr(Phi, {0, 1, 1}, 1, 1e-5), invalid_argument);
  CHECK_THROWS_AS(train_ovr(Phi, {0, 1}, 2, 1e-5), invalid_argument);
  CHECK_THROWS_AS(train_ovr(Phi, {0, 1, 1}, 2, 0.0), invalid_argument);
}

TEST_CASE("to_standard_form preserves predictions of the primal path") {
  std::mt19937_64 rng(72);
  const Points X = oracle::random_points(200, 4, rng), T = oracle::random_points(100, 4, rng);
  const std::vector<int> y = labels_from(X, 3);
  const KernelConfig cfg{KernelKind::rbf, 2.0};
  for (MapVariant v : {MapVariant::standard, MapVariant::ensemble}) {
    const IndexSet idx = uniform_landmarks(200, 30, 4);
    const NystromMap map = v == MapVariant::standard ? fit_standard(X, idx, 20, cfg)
                                                     : fit_ensemble(X, idx, 5, 30, cfg);
    const RidgeModel m = train_ovr(transform(map, X), y, 3, 1e-5);
    const StandardClassifier clf = to_standard_form(m, map, {"a", "b", "c"});
    const Matrix primal = primal_decision_values(m, transform(map, T));
    CHECK((decision_values(clf, T) - primal).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(clf.A.rows() == 30);
    CHECK(clf.class_names.size() == 3);
  }
}

TEST_CASE("to_standard_form: identity A_hat and shapes") {
  std::mt19937_64 rng(73);
  const Points X = oracle::random_points(10, 5, rng);
  NystromMap map = fit_standard(X, iota(10), 10, {KernelKind::rbf, 1.0});
  map.a_hat = Matrix::Identity(10, 10);
  RidgeModel m;
  m.W = Matrix::Random(10, 2);
  m.b = Vector::Zero(2);
  const StandardClassifier clf = to_standard_form(m, map);
  CHECK(clf.A == m.W);
  CHECK(clf.A.rows() == 10);
  CHECK(clf.A.cols() == 2);
  m.W = Matrix::Random(9, 2);
  CHECK_THROWS_AS(to_standard_form(m, map), invalid_argument);
}

TEST_CASE("predict: constant biases and tie rule") {
  StandardClassifier clf;
  clf.support = Points::Random(3, 2);
  clf.A = Matrix::Zero(3, 2);
  clf.b = Vector(2);
  clf.b << 1, 0;
  clf.kernel = {KernelKind::rbf, 1.0};
  for (int p : predict(clf, Points::Random(20, 2))) CHECK(p == 0);
  Matrix H(2, 3);
  H << 1, 1, 0, 0, 2, 2;
  CHECK(argmax_rows(H) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(decision_values(clf, Points::Zero(2, 3)), invalid_argument);
}

TEST_CASE("decision values follow kernel distance for one support point") {
  StandardClassifier clf;
  clf.support = Points::Zero(1, 2);
  clf.A = Matrix::Ones(1, 2);
  clf.A(0, 1) = 0.0;
  clf.b = Vector::Zero(2);
  clf.kernel = {KernelKind::rbf, 0.7};
  Points T(4, 2);
  T << 0.1, 0, 0.5, 0, 1.0, 0.2, 2.0, 1.0;
  const Matrix H = decision_values(clf, T);
  for (Index i = 1; i < 4; ++i) CHECK(H(i, 0) < H(i - 1, 0));
}

TEST_CASE("argmax is invariant to adding a row constant; binary sign rule") {
  std::mt19937_64 rng(74);
  std::normal_distribution<double> n;
  Matrix H(200, 4);
  for (Index i = 0; i < H.size(); ++i) H(i) = n(rng);
  Eigen::RowVectorXd c(4);
  c.setConstant(3.7);
  CHECK(argmax_rows(H) == argmax_rows(H.rowwise() + c));
  const Matrix H2 = H.leftCols(2);
  const std::vector<int> p = argmax_rows(H2);
  for (Index i = 0; i < 200; ++i) CHECK(p[static_cast<std::size_t>(i)] == (H2(i, 1) - H2(i, 0) > 0 ? 1 : 0));
}

TEST_CASE("accuracy") {
  CHECK(accuracy({0, 1, 1, 0}, {0, 1, 0, 0}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(accuracy({0}, {0, 1}), invalid_argument);
}

TEST_CASE("exact_krr: identity kernel interpolates") {
  const std::vector<int> y{0, 1, 2, 1, 0, 2, 2};
  const ExactKrrModel m = exact_krr(Matrix::Identity(7, 7), y, 3, 1e-9);
  CHECK((m.train_values - one_vs_rest_targets(y, 3)).cwiseAbs().maxCoeff() < 1e-6);
  for (Index i = 0; i < 7; ++i) CHECK(m.margins(i) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("exact_krr: scaling K and rho together") {
  std::mt19937_64 rng(75);
  const Points X = oracle::random_points(80, 3, rng);
  const std::vector<int> y = labels_from(X, 2);
  const Matrix K = oracle::rbf_gram(X, X, 2.0);
  const ExactKrrModel a = exact_krr(K, y, 2, 1e-3), b = exact_krr(7.0 * K, y, 2, 7e-3);
  CHECK((a.train_values - b.train_values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exact_krr matches primal ridge on a full-rank Nystrom map") {
  std::mt19937_64 rng(76);
  for (Index N : {Index{50}, Index{150}, Index{300}}) {
    const Points X = oracle::random_points(N, 3, rng), T = oracle::random_points(60, 3, rng);
    const std::vector<int> y = labels_from(X, 3);
    const KernelConfig cfg{KernelKind::rbf, 3.0};
    const NystromMap map = fit_standard(X, uniform_landmarks(N, N, 1), N, cfg);
    const double rho = 1e-5;
    const StandardClassifier clf = to_standard_form(train_ovr(transform(map, X), y, 3, rho), map);
    const ExactKrrModel dual = exact_krr(approx_kernel(map, X, X), y, 3, rho);
    const Matrix gap = decision_values(clf, T) - exact_krr_decision(dual, approx_kernel(map, X, T));
    CHECK(gap.cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("exact_krr: errors") {
  CHECK_THROWS_AS(exact_krr(Matrix::Identity(3, 2), {0, 1, 0}, 2, 1.0), invalid_argument);
  CHECK_THROWS_AS(exact_krr(Matrix::Identity(kExactKrrCap + 1, kExactKrrCap + 1),
                            std::vector<int>(kExactKrrCap + 1, 0), 2, 1.0),
                  invalid_argument);
  CHECK_THROWS_AS(exact_krr(Matrix::Identity(3, 3), {0, 1}, 2, 1.0), invalid_argument);
}

TEST_CASE("StandardClassifier JSON round trip") {
  std::mt19937_64 rng(77);
  const Points X = oracle::random_points(50, 3, rng);
  const std::vector<int> y = labels_from(X, 2);
  const NystromMap map = fit_standard(X, uniform_landmarks(50, 10, 3), 10, {KernelKind::rbf, 1.0 / 3.0});
  const StandardClassifier clf = to_standard_form(train_ovr(transform(map, X), y, 2, 1e-5), map, {"-1", "+1"});
  const StandardClassifier back = standard_classifier_from_json(json::parse(dump_json(to_json(clf))));
  CHECK(back.support == clf.support);
  CHECK(back.A == clf.A);
  CHECK(back.b == clf.b);
  CHECK(back.kernel.gamma == clf.kernel.gamma);
  CHECK(back.class_names == clf.class_names);
  CHECK(predict(back, X) == predict(clf, X));
}
