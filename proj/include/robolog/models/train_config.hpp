#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "robolog/error.hpp"

namespace robolog {

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 300;
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;
  double c_param = 1.0;              // SVM only
  double threshold_quantile = 0.95;  // autoencoder only

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
      throw Error(ErrorCode::InvalidArgument, "learning_rate must be > 0");
    if (!(c_param > 0.0) || !std::isfinite(c_param))
      throw Error(ErrorCode::InvalidArgument, "c_param must be > 0");
    if (!(threshold_quantile > 0.0 && threshold_quantile < 1.0))
      throw Error(ErrorCode::InvalidArgument, "threshold_quantile must lie in (0, 1)");
  }
};

inline TrainConfig default_lr_config() { return {0.1, 300, 0, 0, 1.0, 0.95}; }
inline TrainConfig default_svm_config() { return {0.1, 100, 1, 0, 1.0, 0.95}; }
inline TrainConfig default_ae_config() { return {0.01, 200, 32, 0, 1.0, 0.95}; }

}  // namespace robolog
