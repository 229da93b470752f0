#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "careerpred/classical.hpp"
#include "careerpred/error.hpp"
#include "careerpred/neural.hpp"

namespace careerpred::app {

/// The eight classifiers, in the order reports list them.
enum class ModelKind { Dt, Svm, Lr, Knn, Nb, Cnn, Mlp, Lstm };

inline constexpr std::array<ModelKind, 8> kAllKinds = {ModelKind::Dt,  ModelKind::Svm, ModelKind::Lr,  ModelKind::Knn,
                                                        ModelKind::Nb,  ModelKind::Cnn, ModelKind::Mlp, ModelKind::Lstm};

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Dt: return "dt";
    case ModelKind::Svm: return "svm";
    case ModelKind::Lr: return "lr";
    case ModelKind::Knn: return "knn";
    case ModelKind::Nb: return "nb";
    case ModelKind::Cnn: return "cnn";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Lstm: return "lstm";
  }
  return "?";
}

inline ModelKind parse_kind(std::string_view name) {
  for (auto k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::Input, "unknown model kind '" + std::string(name) + "'", std::string(name));
}

inline bool is_neural(ModelKind k) { return k == ModelKind::Cnn || k == ModelKind::Mlp || k == ModelKind::Lstm; }

inline neural::ModelKind neural_kind(ModelKind k) {
  switch (k) {
    case ModelKind::Mlp: return neural::ModelKind::Mlp;
    case ModelKind::Cnn: return neural::ModelKind::Cnn;
    case ModelKind::Lstm: return neural::ModelKind::Lstm;
    default: throw Error(ErrorKind::Input, "not a neural model kind", std::string(to_string(k)));
  }
}

/// Trained parameters of any of the eight models; alternative index equals
/// the ModelKind value.
using AnyModel = std::variant<classical::DecisionTreeModel, classical::LinearSvmModel,
                              classical::LogisticRegressionModel, classical::KnnModel,
                              classical::MultinomialNbModel, neural::CnnModel, neural::MlpModel, neural::LstmModel>;

inline ModelKind kind_of(const AnyModel& m) { return static_cast<ModelKind>(m.index()); }

inline AnyModel from_neural(neural::NeuralModel m) {
  return std::visit([](auto&& model) -> AnyModel { return std::move(model); }, std::move(m));
}

inline Prediction predict(const AnyModel& model, std::span<const double> x) {
  return std::visit(
      [&](const auto& m) -> Prediction {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, neural::MlpModel> || std::is_same_v<T, neural::CnnModel> ||
                      std::is_same_v<T, neural::LstmModel>) {
          return neural::infer(m, x);
        } else {
          return classical::predict(m, x);
        }
      },
      model);
}

inline std::size_t input_dimension(const AnyModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, classical::DecisionTreeModel>) return m.dimension;
        else if constexpr (std::is_same_v<T, classical::KnnModel>) return m.x.cols();
        else if constexpr (std::is_same_v<T, classical::MultinomialNbModel>) return m.log_likelihood.cols();
        else if constexpr (std::is_same_v<T, classical::LinearSvmModel> ||
                           std::is_same_v<T, classical::LogisticRegressionModel>)
          return m.weights.cols();
        else return m.input_dim;
      },
      model);
}

}  // namespace careerpred::app
