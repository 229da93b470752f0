#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "careerpred/app/artifact.hpp"
#include "careerpred/app/models.hpp"
#include "careerpred/classical.hpp"
#include "careerpred/corpus.hpp"
#include "careerpred/error.hpp"
#include "careerpred/neural.hpp"
#include "json.hpp"

namespace careerpred::app {

struct PipelineConfig {
  std::string dataset;
  std::string taxonomy;
  std::string stopwords;
  std::string output_dir = "out";
  corpus::CsvFormat csv;
  double drop_threshold = corpus::kDefaultDropThreshold;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 10;
  std::vector<ModelKind> models{kAllKinds.begin(), kAllKinds.end()};
  classical::DtParams dt;
  classical::SvmParams svm;
  classical::LrParams lr;
  std::size_t knn_k = 3;
  double nb_alpha = 1.0;
  neural::TrainingConfig training;
  neural::NeuralArch arch;
};

namespace detail {

template <class T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

inline char single_char(const std::string& s, const char* what) {
  if (s.size() != 1) throw Error(ErrorKind::Config, std::string(what) + " must be a single character", s);
  return s[0];
}

inline void require_range(bool ok, const std::string& what, const std::string& value) {
  if (!ok) throw Error(ErrorKind::Config, what + " is out of range", value);
}

}  // namespace detail

inline json to_json(const PipelineConfig& c) {
  json models = json::array();
  for (auto k : c.models) models.push_back(std::string(to_string(k)));
  json columns = {{"semester", c.csv.columns.semester},
                  {"interest_field", c.csv.columns.interest_field},
                  {"research_field", c.csv.columns.research_field},
                  {"higher_study_field", c.csv.columns.higher_study_field},
                  {"core_courses", c.csv.columns.core_courses},
                  {"skills", c.csv.columns.skills},
                  {"engaged", c.csv.columns.engaged},
                  {"contribution_field", c.csv.columns.contribution_field}};
  return {
      {"dataset", c.dataset},
      {"taxonomy", c.taxonomy},
      {"stopwords", c.stopwords},
      {"output_dir", c.output_dir},
      {"csv", {{"delimiter", std::string(1, c.csv.delimiter)}, {"list_delimiters", c.csv.list_delimiters},
               {"columns", columns}}},
      {"drop_threshold", c.drop_threshold},
      {"split", {{"ratio", c.split_ratio}, {"seed", c.split_seed}}},
      {"models", models},
      {"dt", {{"max_depth", c.dt.max_depth ? json(*c.dt.max_depth) : json(nullptr)},
              {"min_samples_split", c.dt.min_samples_split}}},
      {"svm", {{"learning_rate", c.svm.learning_rate}, {"epochs", c.svm.epochs}, {"lambda", c.svm.lambda}}},
      {"lr", {{"learning_rate", c.lr.learning_rate}, {"max_iters", c.lr.max_iters}, {"tolerance", c.lr.tolerance},
              {"lambda", c.lr.lambda}, {"seed", c.lr.seed}}},
      {"knn", {{"k", c.knn_k}}},
      {"nb", {{"alpha", c.nb_alpha}}},
      {"neural", {{"epochs", c.training.epochs}, {"batch_size", c.training.batch_size},
                  {"learning_rate", c.training.learning_rate}, {"momentum", c.training.momentum},
                  {"validation_ratio", c.training.validation_ratio}, {"seed", c.training.seed}}},
      {"mlp", {{"hidden", c.arch.mlp.hidden}, {"dropout", c.arch.mlp.dropout}}},
      {"cnn", {{"kernel", c.arch.cnn.kernel}, {"filters", c.arch.cnn.filters}, {"pool", c.arch.cnn.pool},
               {"dropout", c.arch.cnn.dropout}, {"dense", c.arch.cnn.dense}}},
      {"lstm", {{"hidden", c.arch.lstm.hidden}, {"dropout", c.arch.lstm.dropout}, {"dense", c.arch.lstm.dense}}},
  };
}

/// Every key is optional; missing keys keep their defaults. Relative paths
/// are resolved against `base_dir`.
inline PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  using detail::read;
  if (!j.is_object()) throw Error(ErrorKind::Config, "configuration must be a JSON object");
  PipelineConfig c;
  try {
    read(j, "dataset", c.dataset);
    read(j, "taxonomy", c.taxonomy);
    read(j, "stopwords", c.stopwords);
    read(j, "output_dir", c.output_dir);
    if (auto it = j.find("csv"); it != j.end()) {
      std::string delim(1, c.csv.delimiter);
      read(*it, "delimiter", delim);
      c.csv.delimiter = detail::single_char(delim, "csv.delimiter");
      read(*it, "list_delimiters", c.csv.list_delimiters);
      if (auto cols = it->find("columns"); cols != it->end()) {
        auto& m = c.csv.columns;
        read(*cols, "semester", m.semester);
        read(*cols, "interest_field", m.interest_field);
        read(*cols, "research_field", m.research_field);
        read(*cols, "higher_study_field", m.higher_study_field);
        read(*cols, "core_courses", m.core_courses);
        read(*cols, "skills", m.skills);
        read(*cols, "engaged", m.engaged);
        read(*cols, "contribution_field", m.contribution_field);
      }
    }
    read(j, "drop_threshold", c.drop_threshold);
    if (auto it = j.find("split"); it != j.end()) {
      read(*it, "ratio", c.split_ratio);
      read(*it, "seed", c.split_seed);
    }
    if (auto it = j.find("models"); it != j.end()) {
      c.models.clear();
      for (const auto& name : *it) c.models.push_back(parse_kind(name.get<std::string>()));
    }
    if (auto it = j.find("dt"); it != j.end()) {
      if (auto d = it->find("max_depth"); d != it->end() && !d->is_null()) c.dt.max_depth = d->get<std::size_t>();
      read(*it, "min_samples_split", c.dt.min_samples_split);
    }
    if (auto it = j.find("svm"); it != j.end()) {
      read(*it, "learning_rate", c.svm.learning_rate);
      read(*it, "epochs", c.svm.epochs);
      read(*it, "lambda", c.svm.lambda);
    }
    if (auto it = j.find("lr"); it != j.end()) {
      read(*it, "learning_rate", c.lr.learning_rate);
      read(*it, "max_iters", c.lr.max_iters);
      read(*it, "tolerance", c.lr.tolerance);
      read(*it, "lambda", c.lr.lambda);
      read(*it, "seed", c.lr.seed);
    }
    if (auto it = j.find("knn"); it != j.end()) read(*it, "k", c.knn_k);
    if (auto it = j.find("nb"); it != j.end()) read(*it, "alpha", c.nb_alpha);
    if (auto it = j.find("neural"); it != j.end()) {
      read(*it, "epochs", c.training.epochs);
      read(*it, "batch_size", c.training.batch_size);
      read(*it, "learning_rate", c.training.learning_rate);
      read(*it, "momentum", c.training.momentum);
      read(*it, "validation_ratio", c.training.validation_ratio);
      read(*it, "seed", c.training.seed);
    }
    if (auto it = j.find("mlp"); it != j.end()) {
      read(*it, "hidden", c.arch.mlp.hidden);
      read(*it, "dropout", c.arch.mlp.dropout);
    }
    if (auto it = j.find("cnn"); it != j.end()) {
      read(*it, "kernel", c.arch.cnn.kernel);
      read(*it, "filters", c.arch.cnn.filters);
      read(*it, "pool", c.arch.cnn.pool);
      read(*it, "dropout", c.arch.cnn.dropout);
      read(*it, "dense", c.arch.cnn.dense);
    }
    if (auto it = j.find("lstm"); it != j.end()) {
      read(*it, "hidden", c.arch.lstm.hidden);
      read(*it, "dropout", c.arch.lstm.dropout);
      read(*it, "dense", c.arch.lstm.dense);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed configuration: ") + e.what());
  }
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative() && !base_dir.empty()) p = (base_dir / p).lexically_normal().string();
  };
  resolve(c.dataset);
  resolve(c.taxonomy);
  resolve(c.stopwords);
  resolve(c.output_dir);

  using detail::require_range;
  require_range(c.split_ratio > 0.0 && c.split_ratio < 1.0, "split.ratio", std::to_string(c.split_ratio));
  require_range(c.drop_threshold >= 0.0 && c.drop_threshold <= 1.0, "drop_threshold", std::to_string(c.drop_threshold));
  require_range(c.training.validation_ratio > 0.0 && c.training.validation_ratio < 1.0, "neural.validation_ratio",
                std::to_string(c.training.validation_ratio));
  require_range(c.training.epochs >= 1, "neural.epochs", std::to_string(c.training.epochs));
  require_range(c.training.batch_size >= 1, "neural.batch_size", std::to_string(c.training.batch_size));
  require_range(c.training.learning_rate > 0.0, "neural.learning_rate", std::to_string(c.training.learning_rate));
  require_range(c.knn_k >= 1, "knn.k", std::to_string(c.knn_k));
  require_range(c.nb_alpha > 0.0, "nb.alpha", std::to_string(c.nb_alpha));
  require_range(c.svm.learning_rate > 0.0 && c.svm.lambda > 0.0, "svm", "learning_rate/lambda");
  require_range(c.lr.learning_rate > 0.0 && c.lr.lambda >= 0.0, "lr", "learning_rate/lambda");
  if (c.models.empty()) throw Error(ErrorKind::Config, "no models selected");
  return c;
}

/// Referenced input files must exist; checked before any data is read.
inline void check_paths(const PipelineConfig& c) {
  for (const auto* p : {&c.dataset, &c.taxonomy, &c.stopwords}) {
    if (p->empty()) throw Error(ErrorKind::Config, "dataset, taxonomy and stopwords paths are required");
    if (!std::filesystem::is_regular_file(*p)) throw Error(ErrorKind::Config, "referenced file does not exist", *p);
  }
}

inline PipelineConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(corpus::read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("configuration is not valid JSON: ") + e.what(), path);
  }
  return config_from_json(j, std::filesystem::path(path).parent_path());
}

/// CRC-32 of every setting that influences training output. File locations
/// are excluded; the dataset fingerprint covers content.
inline std::string config_hash(const PipelineConfig& c) {
  auto j = to_json(c);
  for (const auto* key : {"dataset", "taxonomy", "stopwords", "output_dir", "models"}) j.erase(key);
  return crc32_hex(j.dump());
}

}  // namespace careerpred::app
