#pragma once

#include "supnys/kernel.hpp"
#include "supnys/nystrom.hpp"
#include "supnys/types.hpp"

#include <string>
#include <vector>

namespace supnys {

/// One-vs-rest ridge classifier in the primal (feature) domain.
struct RidgeModel {
  Matrix W;  // k x L
  Vector b;  // L
  double rho = 0.0;

  int num_classes() const { return static_cast<int>(b.size()); }
};

/// Deployable classifier h(X) = K(X, support) A + 1 b^T.
struct StandardClassifier {
  Points support;  // n x d
  Matrix A;        // n x L
  Vector b;        // L
  KernelConfig kernel;
  std::vector<std::string> class_names;

  int num_classes() const { return static_cast<int>(b.size()); }
  Index num_support() const { return support.rows(); }
};

/// N x L target matrix: +1 in the sample's own class column, -1 elsewhere.
Matrix one_vs_rest_targets(const std::vector<int> &y, int num_classes);

/// Phi is k x N. Throws if fewer than two classes occur in y.
RidgeModel train_ovr(const Matrix &Phi, const std::vector<int> &y, int num_classes, double rho);

/// |X| x L decision values of the primal model on explicit features.
Matrix primal_decision_values(const RidgeModel &model, const Matrix &Phi);

StandardClassifier to_standard_form(const RidgeModel &model, const NystromMap &map,
                                    std::vector<std::string> class_names = {});

/// |X| x L matrix K(X, support) A + 1 b^T.
Matrix decision_values(const StandardClassifier &clf, const Points &X, int threads = 1);

/// Row-wise argmax, ties to the smaller class id.
std::vector<int> argmax_rows(const Matrix &H);

std::vector<int> predict(const StandardClassifier &clf, const Points &X, int threads = 1);

double accuracy(const std::vector<int> &predicted, const std::vector<int> &truth);

/// Largest training set accepted by exact_krr.
inline constexpr Index kExactKrrCap = 5000;

/// Dual one-vs-rest KRR with unpenalized bias: h(x) = k(x)^T alpha + b.
struct ExactKrrModel {
  Matrix alpha;         // N x L
  Vector b;             // L
  Matrix train_values;  // N x L decision values on the training points
  Vector margins;       // own-class decision value per training point
};

ExactKrrModel exact_krr(const Matrix &K, const std::vector<int> &y, int num_classes, double rho);

/// Decision values for test points given the N x M cross kernel K(train, test).
Matrix exact_krr_decision(const ExactKrrModel &model, const Matrix &K_cross);

}  // namespace supnys
