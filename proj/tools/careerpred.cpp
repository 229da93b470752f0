#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "careerpred/app/config.hpp"
#include "careerpred/app/pipeline.hpp"
#include "careerpred/app/service.hpp"
#include "careerpred/synthetic.hpp"

using namespace careerpred;

namespace {

std::vector<app::ModelKind> kinds_from(const std::vector<std::string>& names, const app::PipelineConfig& config) {
  if (names.empty()) return config.models;
  std::vector<app::ModelKind> out;
  for (const auto& n : names) out.push_back(app::parse_kind(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Career prediction from student skill surveys"};
  cli.require_subcommand(1);
  std::string config_path = "configs/default.json";
  std::optional<std::uint64_t> seed;
  cli.add_option("--config", config_path, "Pipeline configuration (JSON)");
  cli.add_option("--seed", seed, "Override the train/test split seed");

  std::vector<std::string> models;
  auto* train = cli.add_subcommand("train", "Train models and write artifacts");
  train->add_option("--models", models, "Model kinds (default: all in config)")->delimiter(',');
  auto* evaluate = cli.add_subcommand("evaluate", "Evaluate artifacts on the held-out split");
  evaluate->add_option("--models", models, "Model kinds")->delimiter(',');
  auto* compare = cli.add_subcommand("compare", "Print the comparison table of evaluated models");
  auto* report = cli.add_subcommand("report", "Print per-model reports and learning-curve diagnostics");
  report->add_option("--models", models, "Model kinds")->delimiter(',');

  std::string skills;
  std::string model_name = "svm";
  bool as_json = false;
  auto* predict = cli.add_subcommand("predict", "Rank the six master fields for a skill description");
  predict->add_option("--skills", skills, "Free-text skills")->required();
  predict->add_option("--model", model_name, "Model kind");
  predict->add_flag("--json", as_json, "Print the JSON response");

  std::string bind = "127.0.0.1:8080";
  std::string default_model = "svm";
  auto* serve = cli.add_subcommand("serve", "Run the HTTP prediction service");
  serve->add_option("--bind", bind, "host:port");
  serve->add_option("--model", default_model, "Default model for /predict");

  std::size_t rows = 220;
  std::uint64_t synth_seed = 2024;
  std::size_t filler = 40;
  std::string synth_out;
  auto* synth = cli.add_subcommand("synth", "Write a synthetic survey CSV");
  synth->add_option("--rows", rows, "Number of rows");
  synth->add_option("--synth-seed", synth_seed, "Generator seed");
  synth->add_option("--filler", filler, "Size of the free-text term pool");
  synth->add_option("--out", synth_out, "Output path")->required();

  CLI11_PARSE(cli, argc, argv);

  try {
    auto config = app::load_config(config_path);
    if (seed) config.split_seed = *seed;

    if (*train) {
      for (const auto& s : app::cmd_train(config, kinds_from(models, config))) {
        std::cout << std::left << std::setw(6) << app::to_string(s.kind) << std::right << std::fixed
                  << std::setprecision(2) << " train acc " << std::setw(6) << 100.0 * s.train_accuracy << "%  "
                  << std::setw(8) << s.seconds << " s  " << s.artifact << "\n";
      }
    } else if (*evaluate) {
      const auto reports = app::cmd_evaluate(config, kinds_from(models, config));
      std::cout << eval::format_comparison(reports);
    } else if (*compare) {
      std::cout << app::cmd_compare(config);
    } else if (*report) {
      std::cout << app::cmd_report(config, kinds_from(models, config));
    } else if (*predict) {
      const auto artifact = app::load_artifact(app::artifact_path(config.output_dir, app::parse_kind(model_name)));
      const auto stops = textprep::StopWordList::load(config.stopwords);
      const auto r = app::cmd_predict(artifact, skills, stops);
      std::cout << (as_json ? app::response_to_json(r).dump(1, ' ', false, app::json::error_handler_t::replace) + "\n" : app::format_response(r));
    } else if (*serve) {
      app::PredictionService service(app::PredictionService::load_artifacts(config.output_dir),
                                     corpus::MasterFieldTaxonomy::load(config.taxonomy),
                                     textprep::StopWordList::load(config.stopwords), config.output_dir,
                                     app::parse_kind(default_model));
      app::HttpServer server(service);
      const auto [host, port] = app::parse_bind(bind);
      const int bound = server.bind(host, port);
      std::cout << "serving on " << host << ":" << bound << " (default model " << app::to_string(service.default_model())
                << ")" << std::endl;
      server.listen();
    } else if (*synth) {
      synthetic::SurveyOptions opt;
      opt.rows = rows;
      opt.seed = synth_seed;
      opt.filler_pool = filler;
      app::write_text_file(synth_out, synthetic::survey_csv(corpus::MasterFieldTaxonomy::load(config.taxonomy), opt));
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what();
    if (!e.context().empty()) std::cerr << " [" << e.context() << "]";
    std::cerr << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
