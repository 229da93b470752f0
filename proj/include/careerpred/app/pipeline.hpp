#pragma once

// corpus -> textprep -> model training, evaluation reports and predictions,
// plus the file layout shared by the CLI and the HTTP service.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "careerpred/app/artifact.hpp"
#include "careerpred/app/config.hpp"
#include "careerpred/app/models.hpp"
#include "careerpred/classical.hpp"
#include "careerpred/corpus.hpp"
#include "careerpred/eval.hpp"
#include "careerpred/neural.hpp"
#include "careerpred/textprep.hpp"

namespace careerpred::app {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Data preparation

struct PreparedData {
  corpus::CleanDataset cleaned;
  std::vector<std::vector<std::string>> tokens;
  std::vector<int> labels;
  textprep::DatasetSplit split;
  textprep::Vocabulary vocabulary;
  textprep::LabeledMatrix train;
  textprep::LabeledMatrix test;
  std::string fingerprint;
};

/// CRC-32 over the cleaned documents and the split parameters.
inline std::string dataset_fingerprint(const corpus::CleanDataset& cleaned, double ratio, std::uint64_t seed) {
  std::ostringstream s;
  s << corpus::serialize_documents(cleaned) << "split " << std::setprecision(17) << ratio << ' ' << seed;
  return crc32_hex(s.str());
}

/// The vocabulary is built from the training documents only.
inline PreparedData prepare(corpus::CleanDataset cleaned, const textprep::StopWordList& stops, double ratio,
                            std::uint64_t seed) {
  PreparedData p;
  p.cleaned = std::move(cleaned);
  for (const auto& d : p.cleaned.documents) {
    p.tokens.push_back(textprep::normalize(d.text, stops));
    p.labels.push_back(textprep::LabelEncoder::encode(d.label));
  }
  p.split = textprep::stratified_split(p.labels, ratio, seed);
  std::vector<std::vector<std::string>> train_tokens;
  for (auto i : p.split.train_indices) train_tokens.push_back(p.tokens[i]);
  p.vocabulary = textprep::build_vocabulary(train_tokens);
  std::vector<textprep::CountVector> vectors;
  for (const auto& t : p.tokens) vectors.push_back(textprep::vectorize(t, p.vocabulary));
  const auto all = textprep::to_matrix(vectors, p.labels, p.vocabulary.size(), textprep::LabelEncoder::kNumClasses);
  p.train = all.subset(p.split.train_indices);
  p.test = all.subset(p.split.test_indices);
  p.fingerprint = dataset_fingerprint(p.cleaned, ratio, seed);
  return p;
}

inline PreparedData prepare(const PipelineConfig& config) {
  check_paths(config);
  const auto taxonomy = corpus::MasterFieldTaxonomy::load(config.taxonomy);
  const auto stops = textprep::StopWordList::load(config.stopwords);
  const auto survey = corpus::load_survey(config.dataset, config.csv);
  auto cleaned = corpus::clean(survey.records, taxonomy, config.drop_threshold);
  return prepare(std::move(cleaned), stops, config.split_ratio, config.split_seed);
}

// ---------------------------------------------------------------------------
// Training

struct TrainedModel {
  AnyModel model;
  std::optional<neural::LearningCurve> curve;
};

inline TrainedModel train_model(ModelKind kind, const textprep::LabeledMatrix& train, const PipelineConfig& config,
                                const neural::EpochCallback& on_epoch = {}) {
  switch (kind) {
    case ModelKind::Dt: return {classical::dt_train(train, config.dt), std::nullopt};
    case ModelKind::Svm: return {classical::svm_train(train, config.svm), std::nullopt};
    case ModelKind::Lr: return {classical::lr_train(train, config.lr), std::nullopt};
    case ModelKind::Knn: return {classical::knn_train(train, config.knn_k), std::nullopt};
    case ModelKind::Nb: return {classical::mnb_train(train, config.nb_alpha), std::nullopt};
    case ModelKind::Cnn:
    case ModelKind::Mlp:
    case ModelKind::Lstm: {
      auto r = neural::train(neural_kind(kind), train, config.training, config.arch, on_epoch);
      return {from_neural(std::move(r.model)), std::move(r.curve)};
    }
  }
  throw Error(ErrorKind::Input, "unknown model kind");
}

inline double accuracy_on(const AnyModel& model, const textprep::LabeledMatrix& data) {
  if (data.size() == 0) throw Error(ErrorKind::UndefinedMetric, "accuracy over zero documents is undefined");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) correct += predict(model, data.x.row(i)).label == data.y[i];
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

// ---------------------------------------------------------------------------
// Output layout

inline std::string artifact_path(const std::string& dir, ModelKind k) {
  return (fs::path(dir) / (std::string(to_string(k)) + ".model.json")).string();
}
inline std::string curve_path(const std::string& dir, ModelKind k) {
  return (fs::path(dir) / (std::string(to_string(k)) + ".curve.csv")).string();
}
inline std::string report_json_path(const std::string& dir, ModelKind k) {
  return (fs::path(dir) / (std::string(to_string(k)) + ".report.json")).string();
}
inline std::string report_text_path(const std::string& dir, ModelKind k) {
  return (fs::path(dir) / (std::string(to_string(k)) + ".report.txt")).string();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path);
  out << text;
}

// ---------------------------------------------------------------------------
// Commands

struct TrainSummary {
  ModelKind kind;
  double train_accuracy = 0.0;
  double seconds = 0.0;
  std::string artifact;
};

/// Trains each requested kind on the training split and writes
/// <kind>.model.json (plus <kind>.curve.csv for neural kinds), the cleaned
/// dataset, its provenance and the vocabulary into the output directory.
inline std::vector<TrainSummary> cmd_train(const PipelineConfig& config, const std::vector<ModelKind>& kinds) {
  const auto data = prepare(config);
  fs::create_directories(config.output_dir);
  const auto dir = config.output_dir;
  write_text_file((fs::path(dir) / "clean_dataset.tsv").string(), corpus::serialize_documents(data.cleaned));
  write_text_file((fs::path(dir) / "provenance.tsv").string(), corpus::serialize_provenance(data.cleaned));
  write_text_file((fs::path(dir) / "vocabulary.tsv").string(), data.vocabulary.export_text());
  const auto hash = config_hash(config);
  std::vector<TrainSummary> out;
  for (auto kind : kinds) {
    const auto start = std::chrono::steady_clock::now();
    auto trained = train_model(kind, data.train, config);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ModelArtifact a;
    a.vocabulary = data.vocabulary;
    a.model = std::move(trained.model);
    a.metadata = {config.split_seed, hash, data.fingerprint};
    const auto path = artifact_path(dir, kind);
    save_artifact(a, path);
    if (trained.curve) write_text_file(curve_path(dir, kind), trained.curve->to_csv());
    out.push_back({kind, accuracy_on(a.model, data.train), secs, path});
  }
  return out;
}

inline json report_to_json(const eval::EvaluationReport& r) {
  json per_class = json::array();
  for (const auto& c : r.per_class) {
    per_class.push_back({{"label", c.label},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f1", c.f1},
                         {"support", c.support},
                         {"zero_division", {{"precision", c.precision_zero_division},
                                            {"recall", c.recall_zero_division},
                                            {"f1", c.f1_zero_division}}}});
  }
  auto avg = [](const eval::Averages& a) {
    return json{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}, {"support", a.support}};
  };
  json matrix = json::array();
  for (std::size_t i = 0; i < r.matrix.classes(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.matrix.classes(); ++j) row.push_back(r.matrix(i, j));
    matrix.push_back(row);
  }
  return {{"model", r.model},
          {"accuracy", r.accuracy},
          {"n", r.n},
          {"per_class", per_class},
          {"macro", avg(r.macro)},
          {"weighted", avg(r.weighted)},
          {"counts", {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"tn", r.counts.tn}, {"fn", r.counts.fn}}},
          {"confusion_matrix", matrix}};
}

inline eval::EvaluationReport report_from_json(const json& j) {
  try {
    eval::EvaluationReport r;
    r.model = j.at("model").get<std::string>();
    r.accuracy = j.at("accuracy").get<double>();
    r.n = j.at("n").get<std::uint64_t>();
    for (const auto& c : j.at("per_class")) {
      const auto& z = c.at("zero_division");
      r.per_class.push_back({c.at("label").get<std::string>(), c.at("precision").get<double>(),
                             c.at("recall").get<double>(), c.at("f1").get<double>(),
                             c.at("support").get<std::uint64_t>(), z.at("precision").get<bool>(),
                             z.at("recall").get<bool>(), z.at("f1").get<bool>()});
    }
    auto avg = [](const json& a) {
      return eval::Averages{a.at("precision").get<double>(), a.at("recall").get<double>(), a.at("f1").get<double>(),
                            a.at("support").get<std::uint64_t>()};
    };
    r.macro = avg(j.at("macro"));
    r.weighted = avg(j.at("weighted"));
    const auto& k = j.at("counts");
    r.counts = {k.at("tp").get<std::uint64_t>(), k.at("fp").get<std::uint64_t>(), k.at("tn").get<std::uint64_t>(),
                k.at("fn").get<std::uint64_t>()};
    const auto& m = j.at("confusion_matrix");
    r.matrix = eval::ConfusionMatrix(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t jj = 0; jj < m.size(); ++jj) r.matrix(i, jj) = m.at(i).at(jj).get<std::uint64_t>();
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptArtifact, std::string("malformed report: ") + e.what());
  }
}

inline eval::EvaluationReport evaluate_model(const AnyModel& model, const textprep::LabeledMatrix& test) {
  std::vector<int> pred;
  pred.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) pred.push_back(predict(model, test.x.row(i)).label);
  return eval::build_report(test.y, pred, textprep::LabelEncoder::labels(), std::string(to_string(kind_of(model))));
}

/// Evaluates saved artifacts on the held-out split and writes
/// <kind>.report.json, <kind>.report.txt and comparison.txt.
inline std::vector<eval::EvaluationReport> cmd_evaluate(const PipelineConfig& config,
                                                        const std::vector<ModelKind>& kinds) {
  const auto data = prepare(config);
  if (data.test.size() == 0) throw Error(ErrorKind::UndefinedMetric, "the test split holds no documents");
  std::vector<eval::EvaluationReport> reports;
  for (auto kind : kinds) {
    const auto path = artifact_path(config.output_dir, kind);
    const auto a = load_artifact(path);
    if (a.kind() != kind) throw Error(ErrorKind::CorruptArtifact, "artifact holds a different model kind", path);
    if (a.metadata.dataset_fingerprint != data.fingerprint || !(a.vocabulary == data.vocabulary)) {
      throw Error(ErrorKind::StaleArtifact, "artifact was trained on a different dataset or split; retrain it",
                  path + ": " + a.metadata.dataset_fingerprint + " != " + data.fingerprint);
    }
    auto r = evaluate_model(a.model, data.test);
    write_text_file(report_json_path(config.output_dir, kind), report_to_json(r).dump(1) + "\n");
    write_text_file(report_text_path(config.output_dir, kind), eval::format_report(r));
    reports.push_back(std::move(r));
  }
  write_text_file((fs::path(config.output_dir) / "comparison.txt").string(), eval::format_comparison(reports));
  return reports;
}

inline std::optional<eval::EvaluationReport> load_report(const std::string& dir, ModelKind kind) {
  const auto path = report_json_path(dir, kind);
  if (!fs::is_regular_file(path)) return std::nullopt;
  json j;
  try {
    j = json::parse(corpus::read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptArtifact, std::string("report is not valid JSON: ") + e.what(), path);
  }
  return report_from_json(j);
}

/// Comparison table over every evaluated model found in the output directory.
inline std::string cmd_compare(const PipelineConfig& config) {
  std::vector<eval::EvaluationReport> reports;
  for (auto kind : kAllKinds) {
    if (auto r = load_report(config.output_dir, kind)) reports.push_back(std::move(*r));
  }
  if (reports.empty()) throw Error(ErrorKind::Io, "no evaluation reports found; run evaluate first", config.output_dir);
  return eval::format_comparison(reports);
}

/// Per-model tables followed by learning-curve diagnostics for neural kinds.
inline std::string cmd_report(const PipelineConfig& config, const std::vector<ModelKind>& kinds,
                              const neural::FitThresholds& thresholds = {}) {
  std::ostringstream out;
  for (auto kind : kinds) {
    if (auto r = load_report(config.output_dir, kind)) out << eval::format_report(*r);
    else out << "model: " << to_string(kind) << "\n(no evaluation report)\n";
    const auto cpath = curve_path(config.output_dir, kind);
    if (is_neural(kind) && fs::is_regular_file(cpath)) {
      const auto curve = neural::LearningCurve::from_csv(corpus::read_text_file(cpath));
      const auto diag = neural::overfit_gap(curve, thresholds);
      const auto& last = curve.epochs.back();
      out << std::fixed << std::setprecision(4) << "learning curve: " << curve.epochs.size()
          << " epochs, final train acc " << last.train_accuracy << ", val acc " << last.val_accuracy
          << ", gap " << diag.gap.back() << " -> " << neural::to_string(diag.diagnosis) << "\n";
      out.unsetf(std::ios::floatfield);
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Prediction

struct RankedLabel {
  std::string label;
  int code = 0;
  /// Hundredths of a percent; the six entries sum to exactly 10000.
  std::int64_t hundredths = 0;

  double percentage() const { return static_cast<double>(hundredths) / 100.0; }
  std::string formatted() const {
    std::ostringstream s;
    s << hundredths / 100 << '.' << std::setw(2) << std::setfill('0') << hundredths % 100;
    return s.str();
  }
};

struct PredictionResponse {
  std::string model;
  std::vector<RankedLabel> ranking;
  std::vector<std::string> tokens;
  std::vector<std::string> oov;
  bool low_confidence = false;
};

/// Largest-remainder rounding of a distribution to hundredths of a percent,
/// ranked by rounded percentage (ties by label code).
inline std::vector<RankedLabel> rank_percentages(const std::vector<double>& distribution) {
  const std::int64_t total = 10000;
  std::vector<std::size_t> order(distribution.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return distribution[a] > distribution[b]; });
  double sum = 0.0;
  for (double p : distribution) sum += p;
  std::vector<std::int64_t> floors(distribution.size());
  std::vector<double> rems(distribution.size());
  std::int64_t assigned = 0;
  for (std::size_t c = 0; c < distribution.size(); ++c) {
    const double scaled = sum > 0.0 ? distribution[c] / sum * static_cast<double>(total) : 0.0;
    floors[c] = static_cast<std::int64_t>(std::floor(scaled));
    rems[c] = scaled - static_cast<double>(floors[c]);
    assigned += floors[c];
  }
  std::vector<std::size_t> by_rem = order;
  std::stable_sort(by_rem.begin(), by_rem.end(), [&](auto a, auto b) { return rems[a] > rems[b]; });
  for (std::size_t k = 0; assigned < total && !by_rem.empty(); k = (k + 1) % by_rem.size(), ++assigned) {
    ++floors[by_rem[k]];
  }
  std::vector<RankedLabel> out;
  for (auto c : order) out.push_back({textprep::LabelEncoder::decode(static_cast<int>(c)), static_cast<int>(c), floors[c]});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.hundredths != b.hundredths ? a.hundredths > b.hundredths : a.code < b.code;
  });
  return out;
}

/// Never throws on empty or fully out-of-vocabulary text: the model's
/// response to the zero vector is returned, flagged low-confidence.
inline PredictionResponse cmd_predict(const ModelArtifact& artifact, std::string_view skills,
                                      const textprep::StopWordList& stops) {
  PredictionResponse r;
  r.model = std::string(to_string(artifact.kind()));
  r.tokens = textprep::normalize(skills, stops);
  for (const auto& t : r.tokens) {
    if (!artifact.vocabulary.index_of(t) && std::find(r.oov.begin(), r.oov.end(), t) == r.oov.end()) r.oov.push_back(t);
  }
  const auto x = textprep::vectorize(r.tokens, artifact.vocabulary);
  r.low_confidence = x.entries.empty();
  const auto p = predict(artifact.model, x.dense());
  r.ranking = rank_percentages(p.distribution);
  return r;
}

inline json response_to_json(const PredictionResponse& r) {
  json ranking = json::array();
  for (const auto& e : r.ranking) {
    ranking.push_back({{"label", e.label}, {"code", e.code}, {"percentage", e.percentage()}, {"formatted", e.formatted() + "%"}});
  }
  return {{"model", r.model}, {"ranking", ranking}, {"tokens", r.tokens}, {"oov", r.oov},
          {"low_confidence", r.low_confidence}};
}

inline std::string format_response(const PredictionResponse& r) {
  std::ostringstream out;
  out << "model: " << r.model << (r.low_confidence ? "  (low confidence: no known skill terms)" : "") << "\n";
  for (const auto& e : r.ranking) out << std::left << std::setw(10) << e.label << std::right << std::setw(7) << e.formatted() << "%\n";
  if (!r.oov.empty()) {
    out << "unknown terms:";
    for (const auto& t : r.oov) out << ' ' << t;
    out << "\n";
  }
  return out.str();
}

}  // namespace careerpred::app
