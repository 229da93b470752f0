#pragma once

// Versioned, checksummed JSON model artifacts. Numbers are written in the
// shortest form that round-trips to the same 64-bit value, so
// load -> save reproduces the file byte for byte.

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "careerpred/app/models.hpp"
#include "careerpred/corpus.hpp"
#include "careerpred/error.hpp"
#include "careerpred/textprep.hpp"
#include "json.hpp"

namespace careerpred::app {

using json = nlohmann::json;

inline constexpr int kArtifactVersion = 1;
inline constexpr const char* kArtifactFormat = "careerpred-model";

inline std::string crc32_hex(std::string_view bytes) {
  const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

struct ArtifactMetadata {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string dataset_fingerprint;
};

struct ModelArtifact {
  int version = kArtifactVersion;
  textprep::Vocabulary vocabulary;
  AnyModel model;
  ArtifactMetadata metadata;

  ModelKind kind() const { return kind_of(model); }
};

namespace codec {

/// JSON cannot hold non-finite numbers; they travel as strings.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::CorruptArtifact, "expected a number", j.dump());
}

inline json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

inline std::vector<double> numbers(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x));
  return out;
}

inline json matrix(const numkit::DenseMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", numbers(m.values())}};
}

inline numkit::DenseMatrix matrix(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto values = numbers(j.at("values"));
  if (values.size() != rows * cols) {
    throw Error(ErrorKind::ShapeInconsistency, "matrix value count does not match its shape");
  }
  return {rows, cols, std::move(values)};
}

inline json tensor(const neural::Tensor& t) {
  return {{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}, {"values", numbers(t.value)}};
}

inline void tensor(const json& j, neural::Tensor& t) {
  if (j.at("name").get<std::string>() != t.name || j.at("rows").get<std::size_t>() != t.rows ||
      j.at("cols").get<std::size_t>() != t.cols) {
    throw Error(ErrorKind::ShapeInconsistency, "tensor does not match the declared architecture", t.name);
  }
  auto values = numbers(j.at("values"));
  if (values.size() != t.size()) throw Error(ErrorKind::ShapeInconsistency, "tensor value count mismatch", t.name);
  t.value = std::move(values);
}

template <class Model>
json tensors(Model m) {
  json out = json::array();
  for (auto* t : m.parameters()) out.push_back(tensor(*t));
  return out;
}

template <class Model>
void tensors(const json& j, Model& m) {
  auto params = m.parameters();
  if (j.size() != params.size()) throw Error(ErrorKind::ShapeInconsistency, "wrong number of tensors");
  for (std::size_t i = 0; i < params.size(); ++i) tensor(j[i], *params[i]);
}

inline json encode(const classical::DecisionTreeModel& m) {
  json nodes = json::array();
  for (const auto& n : m.nodes) {
    nodes.push_back({n.feature, number(n.threshold), n.left, n.right, numbers(n.class_counts)});
  }
  return {{"dimension", m.dimension}, {"num_classes", m.num_classes}, {"nodes", nodes}};
}

inline json encode(const classical::LinearSvmModel& m) {
  return {{"weights", matrix(m.weights)}, {"bias", numbers(m.bias)}, {"calib_a", numbers(m.calib_a)},
          {"calib_b", numbers(m.calib_b)}, {"lambda", number(m.lambda)}};
}

inline json encode(const classical::LogisticRegressionModel& m) {
  return {{"weights", matrix(m.weights)}, {"bias", numbers(m.bias)}, {"seed", m.seed}, {"lambda", number(m.lambda)}};
}

inline json encode(const classical::KnnModel& m) {
  return {{"x", matrix(m.x)}, {"y", m.y}, {"num_classes", m.num_classes}, {"k", m.k}};
}

inline json encode(const classical::MultinomialNbModel& m) {
  return {{"log_prior", numbers(m.log_prior)}, {"log_likelihood", matrix(m.log_likelihood)}, {"alpha", number(m.alpha)}};
}

inline json encode(const neural::MlpModel& m) {
  json dropout = json::array();
  for (double d : m.arch.dropout) dropout.push_back(number(d));
  return {{"hidden", m.arch.hidden}, {"dropout", dropout}, {"input_dim", m.input_dim},
          {"num_classes", m.num_classes}, {"tensors", tensors(m)}};
}

inline json encode(const neural::CnnModel& m) {
  return {{"kernel", m.arch.kernel},       {"filters", m.arch.filters},      {"pool", m.arch.pool},
          {"dropout", number(m.arch.dropout)}, {"dense", m.arch.dense},     {"input_dim", m.input_dim},
          {"num_classes", m.num_classes},  {"tensors", tensors(m)}};
}

inline json encode(const neural::LstmModel& m) {
  return {{"hidden", m.arch.hidden}, {"dropout", number(m.arch.dropout)}, {"dense", m.arch.dense},
          {"input_dim", m.input_dim}, {"num_classes", m.num_classes},     {"tensors", tensors(m)}};
}

inline AnyModel decode(ModelKind kind, const json& p) {
  numkit::SeededRng scratch(0);  // architecture construction only; values are overwritten
  switch (kind) {
    case ModelKind::Dt: {
      classical::DecisionTreeModel m;
      m.dimension = p.at("dimension").get<std::size_t>();
      m.num_classes = p.at("num_classes").get<int>();
      for (const auto& n : p.at("nodes")) {
        classical::DtNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = number(n.at(1));
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.class_counts = numbers(n.at(4));
        m.nodes.push_back(std::move(node));
      }
      const auto n_nodes = static_cast<int>(m.nodes.size());
      for (const auto& node : m.nodes) {
        const bool bad_leaf = node.is_leaf() && node.class_counts.size() != static_cast<std::size_t>(m.num_classes);
        const bool bad_split = !node.is_leaf() && (static_cast<std::size_t>(node.feature) >= m.dimension ||
                                                   node.left <= 0 || node.left >= n_nodes || node.right <= 0 ||
                                                   node.right >= n_nodes);
        if (bad_leaf || bad_split) throw Error(ErrorKind::ShapeInconsistency, "malformed decision tree node");
      }
      if (m.nodes.empty()) throw Error(ErrorKind::ShapeInconsistency, "decision tree has no nodes");
      return m;
    }
    case ModelKind::Svm: {
      classical::LinearSvmModel m{matrix(p.at("weights")), numbers(p.at("bias")), numbers(p.at("calib_a")),
                                  numbers(p.at("calib_b")), number(p.at("lambda"))};
      const auto c = m.weights.rows();
      if (m.bias.size() != c || m.calib_a.size() != c || m.calib_b.size() != c) {
        throw Error(ErrorKind::ShapeInconsistency, "svm per-class vectors disagree with the weight matrix");
      }
      return m;
    }
    case ModelKind::Lr: {
      classical::LogisticRegressionModel m{matrix(p.at("weights")), numbers(p.at("bias")),
                                           p.at("seed").get<std::uint64_t>(), number(p.at("lambda"))};
      if (m.bias.size() != m.weights.rows()) throw Error(ErrorKind::ShapeInconsistency, "lr bias length mismatch");
      return m;
    }
    case ModelKind::Knn: {
      classical::KnnModel m{matrix(p.at("x")), p.at("y").get<std::vector<int>>(), p.at("num_classes").get<int>(),
                            p.at("k").get<std::size_t>()};
      if (m.y.size() != m.x.rows() || m.k < 1 || m.k > m.y.size()) {
        throw Error(ErrorKind::ShapeInconsistency, "knn labels or k disagree with stored vectors");
      }
      return m;
    }
    case ModelKind::Nb: {
      classical::MultinomialNbModel m{numbers(p.at("log_prior")), matrix(p.at("log_likelihood")),
                                      number(p.at("alpha"))};
      if (m.log_prior.size() != m.log_likelihood.rows()) {
        throw Error(ErrorKind::ShapeInconsistency, "naive bayes prior length mismatch");
      }
      return m;
    }
    case ModelKind::Mlp: {
      neural::MlpArch arch{p.at("hidden").get<std::vector<std::size_t>>(), numbers(p.at("dropout"))};
      neural::MlpModel m(arch, p.at("input_dim").get<std::size_t>(), p.at("num_classes").get<int>(), scratch);
      tensors(p.at("tensors"), m);
      return m;
    }
    case ModelKind::Cnn: {
      neural::CnnArch arch{p.at("kernel").get<std::size_t>(), p.at("filters").get<std::size_t>(),
                           p.at("pool").get<std::size_t>(), number(p.at("dropout")), p.at("dense").get<std::size_t>()};
      neural::CnnModel m(arch, p.at("input_dim").get<std::size_t>(), p.at("num_classes").get<int>(), scratch);
      tensors(p.at("tensors"), m);
      return m;
    }
    case ModelKind::Lstm: {
      neural::LstmArch arch{p.at("hidden").get<std::size_t>(), number(p.at("dropout")),
                            p.at("dense").get<std::size_t>()};
      neural::LstmModel m(arch, p.at("input_dim").get<std::size_t>(), p.at("num_classes").get<int>(), scratch);
      tensors(p.at("tensors"), m);
      return m;
    }
  }
  throw Error(ErrorKind::CorruptArtifact, "unknown model kind");
}

}  // namespace codec

/// Artifact body without the checksum field.
inline json artifact_body(const ModelArtifact& a) {
  json vocab = json::array();
  for (std::size_t i = 0; i < a.vocabulary.size(); ++i) {
    vocab.push_back({a.vocabulary.token(i), a.vocabulary.document_frequency(i)});
  }
  json body;
  body["format"] = kArtifactFormat;
  body["version"] = a.version;
  body["kind"] = std::string(to_string(a.kind()));
  body["labels"] = textprep::LabelEncoder::labels();
  body["vocabulary"] = vocab;
  body["metadata"] = {{"seed", a.metadata.seed},
                      {"config_hash", a.metadata.config_hash},
                      {"dataset_fingerprint", a.metadata.dataset_fingerprint}};
  body["params"] = std::visit([](const auto& m) { return codec::encode(m); }, a.model);
  return body;
}

inline std::string serialize_artifact(const ModelArtifact& a) {
  auto body = artifact_body(a);
  body["checksum"] = crc32_hex(artifact_body(a).dump());
  return body.dump(1) + "\n";
}

inline ModelArtifact parse_artifact(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptArtifact, std::string("artifact is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != kArtifactFormat) {
      throw Error(ErrorKind::CorruptArtifact, "not a careerpred model artifact");
    }
    const int version = doc.at("version").get<int>();
    if (version != kArtifactVersion) {
      throw Error(ErrorKind::VersionMismatch, "unsupported artifact version " + std::to_string(version),
                  std::to_string(version));
    }
    const auto stored = doc.at("checksum").get<std::string>();
    json body = doc;
    body.erase("checksum");
    if (crc32_hex(body.dump()) != stored) {
      throw Error(ErrorKind::CorruptArtifact, "artifact checksum mismatch", stored);
    }
    if (doc.at("labels").get<std::vector<std::string>>() != textprep::LabelEncoder::labels()) {
      throw Error(ErrorKind::ShapeInconsistency, "artifact label table differs from the fixed encoding");
    }
    std::vector<std::pair<std::string, std::size_t>> vocab;
    for (const auto& e : doc.at("vocabulary")) vocab.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::size_t>());
    ModelArtifact a;
    a.version = version;
    a.vocabulary = textprep::Vocabulary(std::move(vocab));
    const auto kind = parse_kind(doc.at("kind").get<std::string>());
    a.model = codec::decode(kind, doc.at("params"));
    const auto& meta = doc.at("metadata");
    a.metadata = {meta.at("seed").get<std::uint64_t>(), meta.at("config_hash").get<std::string>(),
                  meta.at("dataset_fingerprint").get<std::string>()};
    if (input_dimension(a.model) != a.vocabulary.size()) {
      throw Error(ErrorKind::ShapeInconsistency, "model input dimension differs from the vocabulary size",
                  std::to_string(input_dimension(a.model)) + " != " + std::to_string(a.vocabulary.size()));
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptArtifact, std::string("artifact is missing fields: ") + e.what());
  }
}

inline void save_artifact(const ModelArtifact& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write artifact", path);
  out << serialize_artifact(a);
}

inline ModelArtifact load_artifact(const std::string& path) {
  try {
    return parse_artifact(corpus::read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(e.what()) + " (" + path + ")", e.context());
  }
}

}  // namespace careerpred::app
