#pragma once

// JSON-over-HTTP prediction service. Request handling lives in
// PredictionService::handle so it can be exercised without sockets; HttpServer
// binds it to httplib.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "careerpred/app/artifact.hpp"
#include "careerpred/app/pipeline.hpp"
#include "careerpred/corpus.hpp"
#include "careerpred/error.hpp"
#include "careerpred/textprep.hpp"
#include "httplib.h"
#include "json.hpp"

namespace careerpred::app {

struct HttpReply {
  int status = 200;
  json body;
};

inline int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input:
    case ErrorKind::Encoding:
    case ErrorKind::Shape: return 400;
    case ErrorKind::Io: return 404;
    case ErrorKind::UndefinedMetric: return 422;
    default: return 500;
  }
}

inline HttpReply error_reply(int status, std::string_view kind, const std::string& message, const std::string& context) {
  return {status, {{"error_kind", kind}, {"message", message}, {"context", context}}};
}

/// Loaded artifacts are immutable after construction, so handle() is safe to
/// call from many threads at once.
class PredictionService {
 public:
  PredictionService(std::map<ModelKind, ModelArtifact> artifacts, corpus::MasterFieldTaxonomy taxonomy,
                    textprep::StopWordList stops, std::string report_dir = {},
                    std::optional<ModelKind> default_model = std::nullopt)
      : artifacts_(std::move(artifacts)),
        taxonomy_(std::move(taxonomy)),
        stops_(std::move(stops)),
        report_dir_(std::move(report_dir)) {
    if (artifacts_.empty()) throw Error(ErrorKind::Input, "the service needs at least one model artifact");
    if (default_model) {
      if (!artifacts_.contains(*default_model)) {
        throw Error(ErrorKind::Input, "default model is not loaded", std::string(to_string(*default_model)));
      }
      default_ = *default_model;
    } else {
      default_ = artifacts_.contains(ModelKind::Svm) ? ModelKind::Svm : artifacts_.begin()->first;
    }
  }

  /// Loads every <kind>.model.json present in `dir`.
  static std::map<ModelKind, ModelArtifact> load_artifacts(const std::string& dir) {
    std::map<ModelKind, ModelArtifact> out;
    for (auto k : kAllKinds) {
      const auto path = artifact_path(dir, k);
      if (std::filesystem::is_regular_file(path)) out.emplace(k, load_artifact(path));
    }
    if (out.empty()) throw Error(ErrorKind::Io, "no model artifacts found", dir);
    return out;
  }

  ModelKind default_model() const noexcept { return default_; }

  HttpReply handle(std::string_view method, std::string_view path, std::string_view body) const {
    try {
      if (method == "POST" && path == "/predict") return predict(body);
      if (method == "GET" && path == "/labels") return labels();
      if (method == "GET" && path == "/models") return models();
      if (method == "GET" && path == "/taxonomy") return taxonomy();
      if (method == "GET" && path.starts_with("/report/")) return report(path.substr(8));
      return error_reply(404, "not_found", "no such endpoint", std::string(method) + " " + std::string(path));
    } catch (const Error& e) {
      return error_reply(status_for(e.kind()), to_string(e.kind()), e.what(), e.context());
    } catch (const std::exception& e) {
      return error_reply(500, "internal", e.what(), "");
    }
  }

 private:
  HttpReply predict(std::string_view body) const {
    json req;
    try {
      req = json::parse(body);
    } catch (const json::exception& e) {
      return error_reply(400, "input", std::string("request body is not valid JSON: ") + e.what(), "");
    }
    if (!req.is_object() || !req.contains("skills")) {
      return error_reply(400, "input", "request body needs a 'skills' field", "");
    }
    std::string text;
    const auto& skills = req["skills"];
    if (skills.is_string()) {
      text = skills.get<std::string>();
    } else if (skills.is_array()) {
      for (const auto& s : skills) {
        if (!s.is_string()) return error_reply(400, "input", "skills must be strings", s.dump());
        if (!text.empty()) text += ", ";
        text += s.get<std::string>();
      }
    } else {
      return error_reply(400, "input", "skills must be a string or a list of strings", skills.dump());
    }
    auto kind = default_;
    if (auto it = req.find("model"); it != req.end() && !it->is_null()) {
      if (!it->is_string()) return error_reply(400, "input", "model must be a string", it->dump());
      kind = parse_kind(it->get<std::string>());
    }
    auto a = artifacts_.find(kind);
    if (a == artifacts_.end()) {
      return error_reply(404, "input", "model is not loaded", std::string(to_string(kind)));
    }
    return {200, response_to_json(cmd_predict(a->second, text, stops_))};
  }

  HttpReply labels() const {
    json out = json::array();
    const auto names = textprep::LabelEncoder::labels();
    for (std::size_t c = 0; c < names.size(); ++c) out.push_back({{"label", names[c]}, {"code", c}});
    return {200, out};
  }

  HttpReply models() const {
    json out = json::array();
    for (const auto& [kind, a] : artifacts_) {
      json accuracy = nullptr;
      if (!report_dir_.empty()) {
        if (auto r = load_report(report_dir_, kind)) accuracy = r->accuracy;
      }
      out.push_back({{"kind", to_string(kind)},
                     {"default", kind == default_},
                     {"accuracy", accuracy},
                     {"config_hash", a.metadata.config_hash},
                     {"dataset_fingerprint", a.metadata.dataset_fingerprint},
                     {"vocabulary_size", a.vocabulary.size()}});
    }
    return {200, out};
  }

  HttpReply taxonomy() const {
    json field_to_master = json::object();
    for (const auto& f : taxonomy_.fields()) field_to_master[f.field] = f.master;
    json master_to_skills = json::object();
    for (const auto& [master, skills] : taxonomy_.skill_names()) master_to_skills[master] = skills;
    return {200, {{"field_to_master", field_to_master}, {"master_to_skills", master_to_skills}}};
  }

  HttpReply report(std::string_view name) const {
    const auto kind = parse_kind(name);
    if (report_dir_.empty()) return error_reply(404, "io", "no report directory configured", std::string(name));
    auto r = load_report(report_dir_, kind);
    if (!r) return error_reply(404, "io", "no evaluation report for this model; run evaluate first", std::string(name));
    return {200, report_to_json(*r)};
  }

  std::map<ModelKind, ModelArtifact> artifacts_;
  corpus::MasterFieldTaxonomy taxonomy_;
  textprep::StopWordList stops_;
  std::string report_dir_;
  ModelKind default_ = ModelKind::Svm;
};

/// "host:port", ":port" or "port".
inline std::pair<std::string, int> parse_bind(std::string_view addr) {
  std::string host = "127.0.0.1";
  std::string port(addr);
  if (auto colon = addr.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(addr.substr(0, colon));
    port = std::string(addr.substr(colon + 1));
  }
  try {
    std::size_t used = 0;
    const int p = std::stoi(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range(port);
    return {host, p};
  } catch (const std::exception&) {
    throw Error(ErrorKind::Bind, "invalid bind address", std::string(addr));
  }
}

class HttpServer {
 public:
  explicit HttpServer(const PredictionService& service) : service_(service) {
    server_.set_socket_options([](auto sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server_.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                 {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      const auto reply = service_.handle(req.method, req.path, req.body);
      res.status = reply.status;
      res.set_content(reply.body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
    };
    server_.Get(".*", route);
    server_.Post(".*", route);
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }

  ~HttpServer() { stop(); }
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
      bound = server_.bind_to_any_port(host);
    } else if (!server_.bind_to_port(host, port)) {
      bound = -1;
    }
    if (bound < 0) throw Error(ErrorKind::Bind, "cannot bind", host + ":" + std::to_string(port));
    return bound;
  }

  /// Blocks until stop() is called from another thread.
  void listen() { server_.listen_after_bind(); }

  void start_background() {
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  const PredictionService& service_;
  httplib::Server server_;
  std::thread thread_;
};

}  // namespace careerpred::app
