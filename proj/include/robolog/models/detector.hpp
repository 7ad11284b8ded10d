#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/format.hpp"
#include "robolog/models/autoencoder.hpp"
#include "robolog/models/logistic.hpp"
#include "robolog/models/svm.hpp"

namespace robolog {

enum class ModelKind { Logistic, Svm, Autoencoder };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Logistic: return "lr";
    case ModelKind::Svm: return "svm";
    case ModelKind::Autoencoder: return "ae";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "lr") return ModelKind::Logistic;
  if (s == "svm") return ModelKind::Svm;
  if (s == "ae") return ModelKind::Autoencoder;
  throw Error(ErrorCode::ConfigError,
              "expected `lr`, `svm` or `ae`, got `" + std::string(s) + "`");
}

using Detector = std::variant<LogisticModel, SvmModel, AutoencoderModel>;

inline ModelKind kind_of(const Detector& d) { return static_cast<ModelKind>(d.index()); }

struct Score {
  double value = 0.0;  // higher = more anomalous
  int cls = 0;
  friend bool operator==(const Score&, const Score&) = default;
};

inline Score score(const Detector& detector, std::span<const double> x) {
  return std::visit(
      [&](const auto& m) -> Score {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LogisticModel>) {
          if (m.weights.empty()) throw Error(ErrorCode::UntrainedModel, "logistic model untrained");
          const double p = predict_proba(m, x);
          return {p, p > 0.5 ? 1 : 0};
        } else if constexpr (std::is_same_v<M, SvmModel>) {
          if (m.weights.empty()) throw Error(ErrorCode::UntrainedModel, "svm model untrained");
          const double v = decision_value(m, x);
          return {v, svm_class(v)};
        } else {
          if (m.layers.empty() || !m.threshold)
            throw Error(ErrorCode::UntrainedModel, "autoencoder untrained or threshold unset");
          const double e = reconstruction_error(m, x);
          return {e, e > *m.threshold ? 1 : 0};
        }
      },
      detector);
}

// Checkpoint text format:
//   kind=<lr|svm|ae>
//   dims=<comma-separated layer widths>
//   [c=<C>]            svm
//   [threshold=<tau>]  ae
//   one line per parameter tensor, row-major, comma-separated:
//     lr/svm: bias, then weights; ae: per layer weights then bias.
inline void save_checkpoint(const Detector& detector, std::ostream& out) {
  auto line = [&](std::span<const double> v) { out << join_doubles(v.data(), v.size()) << '\n'; };
  out << "kind=" << to_string(kind_of(detector)) << '\n';
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, AutoencoderModel>) {
          out << "dims=";
          for (std::size_t i = 0; i < m.dims.size(); ++i) out << (i ? "," : "") << m.dims[i];
          out << '\n';
          if (m.threshold) out << "threshold=" << format_double(*m.threshold) << '\n';
          for (const DenseLayer& l : m.layers) {
            line(l.weights.data());
            line(l.bias);
          }
        } else {
          out << "dims=" << m.weights.size() << '\n';
          if constexpr (std::is_same_v<M, SvmModel>) out << "c=" << format_double(m.c_param) << '\n';
          const double b = m.bias;
          line(std::span<const double>(&b, 1));
          line(m.weights);
        }
      },
      detector);
  if (!out) throw Error(ErrorCode::IoFailure, "checkpoint write failed");
}

inline Detector load_checkpoint(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);)
    if (!trim(l).empty()) lines.emplace_back(trim(l));
  std::size_t cursor = 0;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorCode::MalformedLine, "checkpoint line " + std::to_string(cursor + 1) + ": " + msg);
  };
  auto keyed = [&](std::string_view key) -> std::string {
    if (cursor >= lines.size() || lines[cursor].rfind(std::string(key) + "=", 0) != 0)
      throw fail("expected `" + std::string(key) + "=`");
    return lines[cursor++].substr(key.size() + 1);
  };
  auto values = [&](std::size_t expected) {
    if (cursor >= lines.size()) throw fail("missing parameter line");
    std::vector<double> v;
    for (auto tok : split(lines[cursor], ',')) {
      double d;
      if (!parse_double(tok, d) || !std::isfinite(d)) throw fail("bad number");
      v.push_back(d);
    }
    if (v.size() != expected)
      throw fail("expected " + std::to_string(expected) + " values, found " + std::to_string(v.size()));
    ++cursor;
    return v;
  };

  const ModelKind kind = parse_model_kind(keyed("kind"));
  std::vector<std::size_t> dims;
  for (auto tok : split(keyed("dims"), ',')) {
    long long d;
    if (!parse_int(tok, d) || d < 1) throw fail("bad dims");
    dims.push_back(static_cast<std::size_t>(d));
  }
  if (kind == ModelKind::Autoencoder) {
    validate_autoencoder_dims(dims);
    AutoencoderModel m;
    m.dims = dims;
    if (cursor < lines.size() && lines[cursor].rfind("threshold=", 0) == 0) {
      double tau;
      if (!parse_double(keyed("threshold"), tau) || !(tau >= 0.0)) throw fail("bad threshold");
      m.threshold = tau;
    }
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      DenseLayer layer{Matrix(dims[l + 1], dims[l]), {}};
      const auto w = values(dims[l + 1] * dims[l]);
      std::copy(w.begin(), w.end(), layer.weights.data().begin());
      layer.bias = values(dims[l + 1]);
      m.layers.push_back(std::move(layer));
    }
    return m;
  }
  if (dims.size() != 1) throw fail("linear models have a single dims entry");
  double c = 1.0;
  if (kind == ModelKind::Svm && (!parse_double(keyed("c"), c) || !(c > 0.0)))
    throw fail("bad c");
  const double bias = values(1)[0];
  auto weights = values(dims[0]);
  if (kind == ModelKind::Logistic) return LogisticModel{bias, std::move(weights)};
  return SvmModel{std::move(weights), bias, c};
}

inline void save_checkpoint(const Detector& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  save_checkpoint(d, out);
}

inline Detector load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return load_checkpoint(in);
}

}  // namespace robolog
