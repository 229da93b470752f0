#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace careerpred {

enum class ErrorKind {
  Schema,
  EmptyInput,
  UnmappedField,
  EmptyDataset,
  EmptyVocabulary,
  Encoding,
  Stratification,
  Shape,
  Training,
  Divergence,
  Oracle,
  UndefinedMetric,
  Input,
  StaleArtifact,
  VersionMismatch,
  CorruptArtifact,
  ShapeInconsistency,
  Config,
  Io,
  Bind,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema: return "schema";
    case ErrorKind::EmptyInput: return "empty_input";
    case ErrorKind::UnmappedField: return "unmapped_field";
    case ErrorKind::EmptyDataset: return "empty_dataset";
    case ErrorKind::EmptyVocabulary: return "empty_vocabulary";
    case ErrorKind::Encoding: return "encoding";
    case ErrorKind::Stratification: return "stratification";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Training: return "training";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Oracle: return "oracle";
    case ErrorKind::UndefinedMetric: return "undefined_metric";
    case ErrorKind::Input: return "input";
    case ErrorKind::StaleArtifact: return "stale_artifact";
    case ErrorKind::VersionMismatch: return "version_mismatch";
    case ErrorKind::CorruptArtifact: return "corrupt_artifact";
    case ErrorKind::ShapeInconsistency: return "shape_inconsistency";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Bind: return "bind";
  }
  return "unknown";
}

/// Every failure surfaced by the library. `context` carries the offending
/// value (column name, raw field string, file:row, ...) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string context = {})
      : std::runtime_error(message), kind_(kind), context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string context_;
};

}  // namespace careerpred
