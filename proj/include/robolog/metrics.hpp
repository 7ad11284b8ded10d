#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "robolog/error.hpp"

namespace robolog {

// Positive = anomalous = label 1.
struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline ConfusionCounts confusion(std::span<const int> labels, std::span<const int> preds) {
  if (labels.size() != preds.size())
    throw Error(ErrorCode::LengthMismatch, "labels and predictions differ in length");
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "no predictions to score");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      preds[i] ? ++c.tp : ++c.fn;
    } else {
      preds[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

struct ClassScores {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline ClassScores class_scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s;
  if (tp + fp > 0) s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (s.precision + s.recall > 0.0)
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

struct Metrics {
  double precision = 0.0, recall = 0.0, accuracy = 0.0, f1 = 0.0;
  // anomalous-class-only scores
  double binary_precision = 0.0, binary_recall = 0.0, binary_f1 = 0.0;
};

// Support-weighted average over both classes, each taken as positive in
// turn. The weighted recall numerator sum_c support_c * recall_c is the
// integer tp + tn, so weighted recall and accuracy are the same double.
inline Metrics metrics(const ConfusionCounts& c) {
  const std::size_t total = c.total();
  if (total == 0) throw Error(ErrorCode::EmptyInput, "no evaluated records");
  const double n = static_cast<double>(total);
  const ClassScores anomalous = class_scores(c.tp, c.fp, c.fn);
  const ClassScores normal = class_scores(c.tn, c.fn, c.fp);
  const double w1 = static_cast<double>(c.tp + c.fn);
  const double w0 = static_cast<double>(c.tn + c.fp);
  Metrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / n;
  m.recall = static_cast<double>(c.tp + c.tn) / n;
  m.precision = (w1 * anomalous.precision + w0 * normal.precision) / n;
  m.f1 = (w1 * anomalous.f1 + w0 * normal.f1) / n;
  m.binary_precision = anomalous.precision;
  m.binary_recall = anomalous.recall;
  m.binary_f1 = anomalous.f1;
  return m;
}

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

// Threshold sweep over distinct scores, highest first. Tied scores move the
// curve in one diagonal step.
inline std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  std::size_t pos = 0;
  for (int l : labels) pos += (l != 0);
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0)
    throw Error(ErrorCode::SingleClassInput, "ROC needs both classes");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<RocPoint> curve{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      labels[order[i]] ? ++tp : ++fp;
      ++i;
    }
    curve.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                     static_cast<double>(tp) / static_cast<double>(pos)});
  }
  return curve;
}

// Trapezoidal area under a ROC curve.
inline double auc(std::span<const RocPoint> curve) {
  if (curve.size() < 2 || curve.front() != RocPoint{0.0, 0.0} || curve.back() != RocPoint{1.0, 1.0})
    throw Error(ErrorCode::MalformedCurve, "ROC curve must run from (0,0) to (1,1)");
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const RocPoint a = curve[i - 1], b = curve[i];
    if (b.fpr < a.fpr || b.tpr < a.tpr)
      throw Error(ErrorCode::MalformedCurve, "ROC coordinates must be non-decreasing");
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return std::clamp(area, 0.0, 1.0);
}

inline double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const auto curve = roc_curve(scores, labels);
  return auc(curve);
}

}  // namespace robolog
