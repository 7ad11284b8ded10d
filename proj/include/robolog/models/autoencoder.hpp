#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/matrix.hpp"
#include "robolog/models/train_config.hpp"
#include "robolog/random.hpp"

namespace robolog {

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> bias;
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Fully connected autoencoder: tanh on every hidden layer, identity output.
struct AutoencoderModel {
  std::vector<std::size_t> dims;  // e.g. 15-8-4-8-15
  std::vector<DenseLayer> layers;
  std::optional<double> threshold;

  std::size_t input_dim() const { return dims.empty() ? 0 : dims.front(); }
  friend bool operator==(const AutoencoderModel&, const AutoencoderModel&) = default;
};

inline std::vector<std::size_t> default_autoencoder_dims() { return {15, 8, 4, 8, 15}; }

inline void validate_autoencoder_dims(std::span<const std::size_t> dims) {
  if (dims.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "autoencoder needs at least one hidden layer");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] == 0) throw Error(ErrorCode::InvalidArgument, "layer width must be >= 1");
    if (dims[i] != dims[dims.size() - 1 - i])
      throw Error(ErrorCode::InvalidArgument, "encoder and decoder widths must mirror");
  }
}

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
inline AutoencoderModel init_autoencoder(std::span<const std::size_t> dims, Rng& rng) {
  validate_autoencoder_dims(dims);
  AutoencoderModel m;
  m.dims.assign(dims.begin(), dims.end());
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    DenseLayer layer{Matrix(dims[l + 1], dims[l]), std::vector<double>(dims[l + 1])};
    for (double& w : layer.weights.data()) w = (2.0 * uniform01(rng) - 1.0) * bound;
    for (double& b : layer.bias) b = (2.0 * uniform01(rng) - 1.0) * bound;
    m.layers.push_back(std::move(layer));
  }
  return m;
}

namespace detail {

// Activations of every layer, input first.
inline std::vector<std::vector<double>> forward_all(const AutoencoderModel& m,
                                                    std::span<const double> x) {
  std::vector<std::vector<double>> acts;
  acts.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const DenseLayer& layer = m.layers[l];
    const auto& in = acts.back();
    std::vector<double> out(layer.bias);
    for (std::size_t o = 0; o < out.size(); ++o) {
      const auto w = layer.weights.row(o);
      for (std::size_t i = 0; i < in.size(); ++i) out[o] += w[i] * in[i];
    }
    if (l + 1 < m.layers.size())
      for (double& v : out) v = std::tanh(v);
    acts.push_back(std::move(out));
  }
  return acts;
}

inline void require_input(const AutoencoderModel& m, std::size_t size) {
  if (m.layers.empty()) throw Error(ErrorCode::UntrainedModel, "autoencoder has no layers");
  if (size != m.input_dim())
    throw Error(ErrorCode::DimensionMismatch, "autoencoder expects " +
                                                  std::to_string(m.input_dim()) +
                                                  " features, got " + std::to_string(size));
}

}  // namespace detail

inline std::vector<double> reconstruct(const AutoencoderModel& m, std::span<const double> x) {
  detail::require_input(m, x.size());
  return detail::forward_all(m, x).back();
}

// Mean squared error between x and its reconstruction.
inline double reconstruction_error(const AutoencoderModel& m, std::span<const double> x) {
  const auto out = reconstruct(m, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = out[i] - x[i];
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

// Mean reconstruction error over `rows` of `x`.
inline double autoencoder_loss(const AutoencoderModel& m, const Matrix& x,
                               std::span<const std::size_t> rows) {
  double s = 0.0;
  for (std::size_t r : rows) s += reconstruction_error(m, x.row(r));
  return s / static_cast<double>(rows.size());
}

// Backpropagated gradient of autoencoder_loss, laid out like m.layers.
inline std::vector<DenseLayer> autoencoder_gradient(const AutoencoderModel& m, const Matrix& x,
                                                    std::span<const std::size_t> rows) {
  std::vector<DenseLayer> grad;
  for (const DenseLayer& l : m.layers)
    grad.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size())});
  const double scale = 2.0 / (static_cast<double>(rows.size()) * static_cast<double>(m.input_dim()));
  for (std::size_t r : rows) {
    const auto x_row = x.row(r);
    detail::require_input(m, x_row.size());
    const auto acts = detail::forward_all(m, x_row);
    std::vector<double> delta(acts.back().size());
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = scale * (acts.back()[i] - x_row[i]);
    for (std::size_t l = m.layers.size(); l-- > 0;) {
      const auto& in = acts[l];
      DenseLayer& g = grad[l];
      for (std::size_t o = 0; o < delta.size(); ++o) {
        g.bias[o] += delta[o];
        auto gw = g.weights.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) gw[i] += delta[o] * in[i];
      }
      if (l == 0) break;
      std::vector<double> prev(in.size(), 0.0);
      const Matrix& w = m.layers[l].weights;
      for (std::size_t o = 0; o < delta.size(); ++o) {
        const auto wr = w.row(o);
        for (std::size_t i = 0; i < in.size(); ++i) prev[i] += wr[i] * delta[o];
      }
      for (std::size_t i = 0; i < in.size(); ++i) prev[i] *= 1.0 - in[i] * in[i];  // tanh'
      delta = std::move(prev);
    }
  }
  return grad;
}

// Linear-interpolation quantile of an unsorted sample.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Mini-batch gradient descent on the mean squared reconstruction error of
// normal rows; the threshold is the threshold_quantile of the final
// training errors.
inline AutoencoderModel train_autoencoder(const Matrix& normals, const TrainConfig& cfg,
                                          std::span<const std::size_t> dims) {
  cfg.validate();
  if (normals.rows() == 0) throw Error(ErrorCode::EmptyInput, "no normal rows to train on");
  if (dims.empty() || dims.front() != normals.cols())
    throw Error(ErrorCode::DimensionMismatch, "autoencoder input width must equal feature count");
  Rng rng(cfg.seed);
  AutoencoderModel m = init_autoencoder(dims, rng);

  const std::size_t n = normals.rows();
  const std::size_t batch = cfg.batch_size == 0 ? n : std::min(cfg.batch_size, n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::span<const std::size_t> rows(order.data() + begin, std::min(batch, n - begin));
      const auto grad = autoencoder_gradient(m, normals, rows);
      for (std::size_t l = 0; l < m.layers.size(); ++l) {
        auto w = m.layers[l].weights.data();
        const auto gw = grad[l].weights.data();
        for (std::size_t k = 0; k < w.size(); ++k) w[k] -= cfg.learning_rate * gw[k];
        for (std::size_t k = 0; k < m.layers[l].bias.size(); ++k)
          m.layers[l].bias[k] -= cfg.learning_rate * grad[l].bias[k];
      }
    }
    for (const DenseLayer& l : m.layers)
      for (double w : l.weights.data())
        if (!std::isfinite(w))
          throw Error(ErrorCode::DivergenceDetected,
                      "autoencoder weights became non-finite at epoch " + std::to_string(epoch));
  }

  std::vector<double> errors;
  errors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) errors.push_back(reconstruction_error(m, normals.row(i)));
  m.threshold = quantile(std::move(errors), cfg.threshold_quantile);
  return m;
}

inline AutoencoderModel train_autoencoder(const Matrix& normals, const TrainConfig& cfg) {
  const auto dims = default_autoencoder_dims();
  return train_autoencoder(normals, cfg, dims);
}

}  // namespace robolog
