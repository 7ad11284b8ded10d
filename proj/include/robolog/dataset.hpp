#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/matrix.hpp"
#include "robolog/random.hpp"
#include "robolog/trajectory.hpp"

namespace robolog {

inline constexpr std::size_t kFeatureDim = 15;

// Model input order. The timestamp is not a feature.
inline constexpr std::array<std::string_view, kFeatureDim> kFeatureNames{
    "x", "y", "z", "roll", "pitch", "yaw", "vx", "vy", "vz",
    "ax", "ay", "az", "wx", "wy", "wz"};

using FeatureVector = std::array<double, kFeatureDim>;

inline FeatureVector features_of(const LogRecord& r) {
  return {r.position.x,         r.position.y,         r.position.z,
          r.orientation.x,      r.orientation.y,      r.orientation.z,
          r.velocity.x,         r.velocity.y,         r.velocity.z,
          r.acceleration.x,     r.acceleration.y,     r.acceleration.z,
          r.angular_velocity.x, r.angular_velocity.y, r.angular_velocity.z};
}

enum class SplitTag { Train, Test };

inline constexpr double kDegenerateStd = 1e-12;

struct LabeledDataset {
  Matrix features;          // standardized
  std::vector<int> labels;  // 0 normal, 1 anomalous
  std::vector<double> mean;
  std::vector<double> std;
  SplitTag split = SplitTag::Train;

  std::size_t size() const { return labels.size(); }

  std::size_t count(int label) const {
    std::size_t n = 0;
    for (int l : labels) n += (l == label);
    return n;
  }

  // Label-0 rows only; the autoencoder's training input.
  Matrix normals() const {
    Matrix out(0, features.cols());
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == 0) out.append_row(features.row(i));
    return out;
  }
};

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std;

  // Population statistics. The mean is accumulated relative to the first
  // row so that constant columns reproduce their value exactly.
  static Standardizer fit(const Matrix& raw) {
    Standardizer s;
    const std::size_t n = raw.rows(), d = raw.cols();
    s.mean.assign(d, 0.0);
    s.std.assign(d, 1.0);
    if (n == 0) return s;
    for (std::size_t j = 0; j < d; ++j) {
      const double ref = raw(0, j);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += raw(i, j) - ref;
      s.mean[j] = ref + acc / static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double c = raw(i, j) - s.mean[j];
        ss += c * c;
      }
      const double sd = std::sqrt(ss / static_cast<double>(n));
      s.std[j] = sd < kDegenerateStd ? 1.0 : sd;
    }
    return s;
  }

  void apply(std::span<double> row) const {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mean[j]) / std[j];
  }

  Matrix transform(const Matrix& raw) const {
    Matrix out = raw;
    for (std::size_t i = 0; i < out.rows(); ++i) apply(out.row(i));
    return out;
  }
};

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset test;
};

// Pools every record, shuffles with `seed`, and takes round(test_fraction *
// n_c) records of each class c for the test split (in shuffled order).
// Standardization statistics come from the training rows only.
inline DatasetSplit build_dataset(std::span<const Trajectory> normals,
                                  std::span<const Trajectory> anomalous, double test_fraction,
                                  std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "test_fraction must lie in [0, 1)");
  Matrix raw(0, kFeatureDim);
  std::vector<int> labels;
  for (auto group : {normals, anomalous})
    for (const Trajectory& t : group)
      for (const LogRecord& r : t.records) {
        const FeatureVector f = features_of(r);
        for (double v : f)
          if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite feature");
        raw.append_row(f);
        labels.push_back(r.label);
      }
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "no records to build a dataset from");
  std::size_t class_count[2] = {0, 0};
  for (int l : labels) ++class_count[l ? 1 : 0];
  if (class_count[0] == 0 || class_count[1] == 0)
    throw Error(ErrorCode::SingleClassInput, "dataset needs records of both labels");

  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);

  std::size_t test_quota[2];
  for (int c = 0; c < 2; ++c)
    test_quota[c] = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(class_count[c])));

  std::vector<std::size_t> train_rows, test_rows;
  std::size_t taken[2] = {0, 0};
  for (std::size_t idx : order) {
    const int c = labels[idx] ? 1 : 0;
    if (taken[c] < test_quota[c]) {
      ++taken[c];
      test_rows.push_back(idx);
    } else {
      train_rows.push_back(idx);
    }
  }

  auto gather = [&](const std::vector<std::size_t>& rows, SplitTag tag) {
    LabeledDataset ds;
    ds.split = tag;
    ds.features = Matrix(0, kFeatureDim);
    for (std::size_t r : rows) {
      ds.features.append_row(raw.row(r));
      ds.labels.push_back(labels[r]);
    }
    return ds;
  };
  DatasetSplit split{gather(train_rows, SplitTag::Train), gather(test_rows, SplitTag::Test)};
  const Standardizer st = Standardizer::fit(split.train.features);
  for (LabeledDataset* ds : {&split.train, &split.test}) {
    ds->features = st.transform(ds->features);
    ds->mean = st.mean;
    ds->std = st.std;
  }
  return split;
}

}  // namespace robolog
