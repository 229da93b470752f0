#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "careerpred/app/config.hpp"
#include "careerpred/app/pipeline.hpp"
#include "careerpred/neural.hpp"
#include "careerpred/synthetic.hpp"
#include "oracles.hpp"

namespace fixture {

namespace fs = std::filesystem;
using careerpred::app::json;

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("careerpred-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }
  std::string str(const std::string& rel = {}) const { return rel.empty() ? path_.string() : (path_ / rel).string(); }

 private:
  fs::path path_;
};

inline std::string taxonomy_path() { return oracle::source_path("data/taxonomy.txt"); }
inline std::string stopwords_path() { return oracle::source_path("data/stopwords.txt"); }

/// Small architectures and few epochs so the full pipeline runs in seconds.
inline json quick_config_json(const std::string& dataset, const std::string& out_dir) {
  return {{"dataset", dataset},
          {"taxonomy", taxonomy_path()},
          {"stopwords", stopwords_path()},
          {"output_dir", out_dir},
          {"neural", {{"epochs", 3}}},
          {"mlp", {{"hidden", {16, 16, 8, 8}}}},
          {"cnn", {{"filters", 2}, {"dense", 8}}},
          {"lstm", {{"hidden", 4}, {"dense", 8}}}};
}

/// Writes a synthetic survey plus a quick config into `dir`; returns the
/// config path.
inline std::string write_quick_project(const TempDir& dir, std::size_t rows = 90, std::uint64_t seed = 5) {
  const auto tax = careerpred::corpus::MasterFieldTaxonomy::load(taxonomy_path());
  careerpred::synthetic::SurveyOptions opt;
  opt.rows = rows;
  opt.seed = seed;
  careerpred::app::write_text_file(dir.str("survey.csv"), careerpred::synthetic::survey_csv(tax, opt));
  const auto cfg = quick_config_json(dir.str("survey.csv"), dir.str("out"));
  careerpred::app::write_text_file(dir.str("config.json"), cfg.dump(1));
  return dir.str("config.json");
}

/// 12 documents, 3 classes, each class owning two of six count features.
inline careerpred::textprep::LabeledMatrix memorizable() {
  careerpred::textprep::LabeledMatrix m{careerpred::numkit::DenseMatrix(12, 6), {}, 3};
  for (std::size_t i = 0; i < 12; ++i) {
    const int c = static_cast<int>(i % 3);
    m.x(i, 2 * c) = 1.0 + static_cast<double>(i % 2);
    m.x(i, 2 * c + 1) = 1.0 + static_cast<double>((i / 3) % 2);
    m.x(i, (2 * c + 2 + i % 4) % 6) += 1.0;
    m.y.push_back(c);
  }
  return m;
}

/// Settings under which an MLP should drive the memorizable fixture's loss
/// to near zero within 50 epochs.
inline careerpred::neural::TrainingConfig memorize_config() {
  careerpred::neural::TrainingConfig cfg;
  cfg.batch_size = 1;
  cfg.validation_ratio = 0.25;
  return cfg;
}

inline careerpred::neural::NeuralArch memorize_arch() {
  careerpred::neural::NeuralArch arch;
  arch.mlp = {{32, 32, 16, 16}, {0.0, 0.0, 0.0, 0.0}};
  return arch;
}

}  // namespace fixture
