#include "supnys/ridge.hpp"

#include "supnys/error.hpp"
#include "supnys/linalg.hpp"

#include <set>

namespace supnys {

Matrix one_vs_rest_targets(const std::vector<int> &y, int num_classes) {
  Matrix Y = Matrix::Constant(static_cast<Index>(y.size()), num_classes, -1.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0 || y[i] >= num_classes) throw invalid_argument("class id out of range");
    Y(static_cast<Index>(i), y[i]) = 1.0;
  }
  return Y;
}

namespace {

void check_classes(const std::vector<int> &y, int num_classes) {
  if (num_classes < 2) throw invalid_argument("one-vs-rest needs at least two classes");
  if (std::set<int>(y.begin(), y.end()).size() < 2)
    throw invalid_argument("one-vs-rest needs samples from at least two classes");
}

}  // namespace

RidgeModel train_ovr(const Matrix &Phi, const std::vector<int> &y, int num_classes, double rho) {
  if (Phi.cols() != static_cast<Index>(y.size()))
    throw invalid_argument("train_ovr: feature columns do not match label count");
  check_classes(y, num_classes);
  RidgeSolution s = solve_ridge(Phi, one_vs_rest_targets(y, num_classes), rho);
  return {std::move(s.W), std::move(s.b), rho};
}

Matrix primal_decision_values(const RidgeModel &model, const Matrix &Phi) {
  if (Phi.rows() != model.W.rows()) throw invalid_argument("feature dimension mismatch");
  return (Phi.transpose() * model.W).rowwise() + model.b.transpose();
}

StandardClassifier to_standard_form(const RidgeModel &model, const NystromMap &map,
                                    std::vector<std::string> class_names) {
  if (map.a_hat.cols() != model.W.rows())
    throw invalid_argument("model was not trained on this map's features");
  StandardClassifier clf;
  clf.support = map.landmarks;
  clf.A = map.a_hat * model.W;
  clf.b = model.b;
  clf.kernel = map.kernel;
  clf.class_names = std::move(class_names);
  return clf;
}

Matrix decision_values(const StandardClassifier &clf, const Points &X, int threads) {
  if (X.rows() > 0 && X.cols() != clf.support.cols())
    throw invalid_argument("decision_values: dimension mismatch");
  if (X.rows() == 0) return Matrix(0, clf.num_classes());
  return (gram(X, clf.support, clf.kernel, threads) * clf.A).rowwise() + clf.b.transpose();
}

std::vector<int> argmax_rows(const Matrix &H) {
  std::vector<int> out(static_cast<std::size_t>(H.rows()));
  for (Index i = 0; i < H.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < H.cols(); ++c)
      if (H(i, c) > H(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict(const StandardClassifier &clf, const Points &X, int threads) {
  return argmax_rows(decision_values(clf, X, threads));
}

double accuracy(const std::vector<int> &predicted, const std::vector<int> &truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw invalid_argument("accuracy: size mismatch or empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ExactKrrModel exact_krr(const Matrix &K, const std::vector<int> &y, int num_classes, double rho) {
  const Index N = K.rows();
  if (K.cols() != N) throw invalid_argument("exact_krr: kernel matrix is not square");
  if (N > kExactKrrCap)
    throw invalid_argument("exact_krr: N=" + std::to_string(N) + " exceeds the cap of " +
                           std::to_string(kExactKrrCap));
  if (static_cast<Index>(y.size()) != N) throw invalid_argument("exact_krr: label count mismatch");
  if (!(rho > 0.0)) throw invalid_argument("ridge rho must be positive");
  check_classes(y, num_classes);

  // Centred dual: alpha = H (H K H + rho I)^-1 H Y with H = I - 11^T/N, which
  // is the representer form of the centred primal ridge solution.
  const Matrix Y = one_vs_rest_targets(y, num_classes);
  const Vector y_mean = Y.colwise().mean().transpose();
  const Vector k_mean = K.rowwise().mean();
  const double k_all = k_mean.mean();
  Matrix Kc = K;
  Kc.colwise() -= k_mean;
  Kc.rowwise() -= k_mean.transpose();
  Kc.array() += k_all;
  Kc = 0.5 * (Kc + Kc.transpose());
  Kc.diagonal().array() += rho;
  const Matrix Yc = Y.rowwise() - y_mean.transpose();

  Eigen::LDLT<Matrix> ldlt(Kc);
  Matrix beta = ldlt.solve(Yc);
  beta += ldlt.solve(Yc - Kc * beta);

  ExactKrrModel m;
  m.alpha = beta.rowwise() - beta.colwise().mean();
  m.b = y_mean - m.alpha.transpose() * k_mean;
  m.train_values = (K * m.alpha).rowwise() + m.b.transpose();
  m.margins.resize(N);
  for (Index i = 0; i < N; ++i) m.margins(i) = m.train_values(i, y[static_cast<std::size_t>(i)]);
  return m;
}

Matrix exact_krr_decision(const ExactKrrModel &model, const Matrix &K_cross) {
  if (K_cross.rows() != model.alpha.rows())
    throw invalid_argument("exact_krr_decision: cross kernel row count mismatch");
  return (K_cross.transpose() * model.alpha).rowwise() + model.b.transpose();
}

}  // namespace supnys
