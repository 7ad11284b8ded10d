#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "robolog/dataset.hpp"
#include "robolog/error.hpp"
#include "robolog/matrix.hpp"
#include "robolog/models/logistic.hpp"
#include "robolog/models/train_config.hpp"
#include "robolog/random.hpp"

namespace robolog {

// K(a, b) = a . b
inline double linear_kernel(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "kernel operands differ in dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double c_param = 1.0;
  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

// w . x + b; positive means anomalous.
inline double decision_value(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size())
    throw Error(ErrorCode::DimensionMismatch, "svm model expects " +
                                                  std::to_string(model.weights.size()) +
                                                  " features, got " + std::to_string(x.size()));
  return linear_kernel(model.weights, x) + model.bias;
}

inline int svm_class(double value) { return value > 0.0 ? 1 : 0; }

inline double hinge(double signed_label, double value) {
  return std::max(0.0, 1.0 - signed_label * value);
}

// (1/2)|w|^2 + C * sum_i max(0, 1 - y_i (w . x_i + b)), labels 0 -> -1.
inline double svm_objective(const SvmModel& model, const Matrix& x, std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    loss += hinge(labels[i] ? 1.0 : -1.0, decision_value(model, x.row(i)));
  return 0.5 * linear_kernel(model.weights, model.weights) + model.c_param * loss;
}

// Stochastic subgradient descent on the objective divided by C*N, i.e.
// lambda/2 |w|^2 + mean hinge with lambda = 1/(C*N), using the step
// eta_t = lr / (1 + lr * lambda * t) and a seeded reshuffle every epoch.
// The bias is not regularized. Returns the epoch-end iterate with the lowest
// primal objective, starting from w = 0, b = 0.
inline SvmModel train_svm(const Matrix& x, std::span<const int> labels, const TrainConfig& cfg) {
  cfg.validate();
  require_binary_labels(x, labels);
  const std::size_t n = x.rows();
  const double lambda = 1.0 / (cfg.c_param * static_cast<double>(n));

  SvmModel model;
  model.weights.assign(x.cols(), 0.0);
  model.c_param = cfg.c_param;
  SvmModel best = model;
  double best_obj = svm_objective(model, x, labels);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(cfg.seed);
  double t = 0.0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t idx : order) {
      const double eta = cfg.learning_rate / (1.0 + cfg.learning_rate * lambda * t);
      const auto row = x.row(idx);
      const double y = labels[idx] ? 1.0 : -1.0;
      const bool violated = y * decision_value(model, row) < 1.0;
      const double shrink = 1.0 - eta * lambda;
      for (std::size_t j = 0; j < row.size(); ++j) {
        model.weights[j] *= shrink;
        if (violated) model.weights[j] += eta * y * row[j];
      }
      if (violated) model.bias += eta * y;
      t += 1.0;
    }
    const double obj = svm_objective(model, x, labels);
    if (!std::isfinite(obj))
      throw Error(ErrorCode::DivergenceDetected,
                  "svm objective became non-finite at epoch " + std::to_string(epoch));
    if (obj < best_obj) {
      best_obj = obj;
      best = model;
    }
  }
  return best;
}

inline SvmModel train_svm(const LabeledDataset& train, const TrainConfig& cfg) {
  return train_svm(train.features, train.labels, cfg);
}

}  // namespace robolog
