#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "robolog/dataset.hpp"
#include "robolog/error.hpp"
#include "robolog/matrix.hpp"
#include "robolog/models/train_config.hpp"

namespace robolog {

// 1 / (1 + e^-z) without overflow for large |z|.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z), stable in both tails.
inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

struct LogisticModel {
  double bias = 0.0;
  std::vector<double> weights;

  double linear(std::span<const double> x) const {
    if (x.size() != weights.size())
      throw Error(ErrorCode::DimensionMismatch, "logistic model expects " +
                                                    std::to_string(weights.size()) +
                                                    " features, got " + std::to_string(x.size()));
    double z = bias;
    for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
    return z;
  }

  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;
};

// P(y = 1 | x).
inline double predict_proba(const LogisticModel& model, std::span<const double> x) {
  return sigmoid(model.linear(x));
}

inline void require_binary_labels(const Matrix& x, std::span<const int> labels) {
  if (x.rows() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "feature rows and labels differ in length");
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "no training rows");
  bool seen[2] = {false, false};
  for (int l : labels) {
    if (l != 0 && l != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    seen[l] = true;
  }
  if (!seen[0] || !seen[1])
    throw Error(ErrorCode::SingleClassInput, "training data contains a single class");
}

// Mean binary cross-entropy.
inline double logistic_loss(const LogisticModel& model, const Matrix& x,
                            std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double z = model.linear(x.row(i));
    total += softplus(z) - labels[i] * z;
  }
  return total / static_cast<double>(x.rows());
}

struct LogisticGradient {
  double bias = 0.0;
  std::vector<double> weights;
};

inline LogisticGradient logistic_gradient(const LogisticModel& model, const Matrix& x,
                                          std::span<const int> labels) {
  LogisticGradient g;
  g.weights.assign(model.weights.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    const double r = (sigmoid(model.linear(row)) - labels[i]) * inv_n;
    g.bias += r;
    for (std::size_t j = 0; j < row.size(); ++j) g.weights[j] += r * row[j];
  }
  return g;
}

// Full-batch gradient descent from zero parameters. When `loss_history` is
// given it receives the loss before training and after every epoch.
inline LogisticModel train_logistic(const Matrix& x, std::span<const int> labels,
                                    const TrainConfig& cfg,
                                    std::vector<double>* loss_history = nullptr) {
  cfg.validate();
  require_binary_labels(x, labels);
  LogisticModel model;
  model.weights.assign(x.cols(), 0.0);
  if (loss_history) loss_history->push_back(logistic_loss(model, x, labels));
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const LogisticGradient g = logistic_gradient(model, x, labels);
    model.bias -= cfg.learning_rate * g.bias;
    for (std::size_t j = 0; j < model.weights.size(); ++j)
      model.weights[j] -= cfg.learning_rate * g.weights[j];
    const double loss = logistic_loss(model, x, labels);
    if (!std::isfinite(loss))
      throw Error(ErrorCode::DivergenceDetected,
                  "logistic loss became non-finite at epoch " + std::to_string(epoch));
    if (loss_history) loss_history->push_back(loss);
  }
  return model;
}

inline LogisticModel train_logistic(const LabeledDataset& train, const TrainConfig& cfg) {
  return train_logistic(train.features, train.labels, cfg);
}

}  // namespace robolog
