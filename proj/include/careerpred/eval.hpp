#pragma once

// Confusion matrices, accuracy / precision / recall / F1, macro and weighted
// averages, micro one-vs-rest counts and per-model report assembly.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "careerpred/error.hpp"

namespace careerpred::eval {

/// C x C grid; entry (i, j) counts true class i predicted as j.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes = 0) : classes_(classes), cells_(classes * classes, 0) {}

  std::size_t classes() const noexcept { return classes_; }
  std::uint64_t operator()(std::size_t truth, std::size_t pred) const { return cells_[truth * classes_ + pred]; }
  std::uint64_t& operator()(std::size_t truth, std::size_t pred) { return cells_[truth * classes_ + pred]; }

  std::uint64_t total() const { return std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0}); }
  std::uint64_t trace() const {
    std::uint64_t t = 0;
    for (std::size_t c = 0; c < classes_; ++c) t += (*this)(c, c);
    return t;
  }
  std::uint64_t row_sum(std::size_t c) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < classes_; ++j) s += (*this)(c, j);
    return s;
  }
  std::uint64_t column_sum(std::size_t c) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < classes_; ++i) s += (*this)(i, c);
    return s;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t classes_;
  std::vector<std::uint64_t> cells_;
};

inline ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred, std::size_t classes) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorKind::Input, "y_true and y_pred lengths differ",
                std::to_string(y_true.size()) + " vs " + std::to_string(y_pred.size()));
  }
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto t = y_true[i];
    const auto p = y_pred[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= classes || static_cast<std::size_t>(p) >= classes) {
      throw Error(ErrorKind::Input, "label code out of range", "item " + std::to_string(i));
    }
    ++cm(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
  }
  return cm;
}

/// Correct over total.
inline double accuracy(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw Error(ErrorKind::UndefinedMetric, "accuracy of an empty confusion matrix is undefined");
  return static_cast<double>(cm.trace()) / static_cast<double>(n);
}

/// Per-class values plus which entries hit the 0/0 convention.
struct PerClass {
  std::vector<double> values;
  std::vector<bool> zero_division;
};

inline PerClass precision_per_class(const ConfusionMatrix& cm) {
  PerClass out{std::vector<double>(cm.classes(), 0.0), std::vector<bool>(cm.classes(), false)};
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const auto col = cm.column_sum(c);
    if (col == 0) out.zero_division[c] = true;
    else out.values[c] = static_cast<double>(cm(c, c)) / static_cast<double>(col);
  }
  return out;
}

inline PerClass recall_per_class(const ConfusionMatrix& cm) {
  PerClass out{std::vector<double>(cm.classes(), 0.0), std::vector<bool>(cm.classes(), false)};
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const auto row = cm.row_sum(c);
    if (row == 0) out.zero_division[c] = true;
    else out.values[c] = static_cast<double>(cm(c, c)) / static_cast<double>(row);
  }
  return out;
}

inline PerClass f1_per_class(const ConfusionMatrix& cm) {
  const auto p = precision_per_class(cm);
  const auto r = recall_per_class(cm);
  PerClass out{std::vector<double>(cm.classes(), 0.0), std::vector<bool>(cm.classes(), false)};
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const double s = p.values[c] + r.values[c];
    if (s == 0.0) out.zero_division[c] = true;
    else out.values[c] = 2.0 * p.values[c] * r.values[c] / s;
  }
  return out;
}

inline double macro_avg(const std::vector<double>& per_class) {
  if (per_class.empty()) return 0.0;
  return std::accumulate(per_class.begin(), per_class.end(), 0.0) / static_cast<double>(per_class.size());
}

inline double weighted_avg(const std::vector<double>& per_class, const std::vector<std::uint64_t>& supports) {
  if (per_class.size() != supports.size()) throw Error(ErrorKind::Input, "per-class values and supports differ in length");
  double num = 0.0;
  std::uint64_t den = 0;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    num += per_class[c] * static_cast<double>(supports[c]);
    den += supports[c];
  }
  if (den == 0) throw Error(ErrorKind::UndefinedMetric, "supports sum to zero");
  return num / static_cast<double>(den);
}

/// One-vs-rest counts summed over every class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline ConfusionCounts micro_ovr_counts(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw Error(ErrorKind::UndefinedMetric, "confusion counts of an empty matrix are undefined");
  ConfusionCounts k;
  k.tp = cm.trace();
  k.fp = n - k.tp;
  k.fn = n - k.tp;
  k.tn = n * (cm.classes() - 1) - k.fp;
  return k;
}

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  bool precision_zero_division = false;
  bool recall_zero_division = false;
  bool f1_zero_division = false;
};

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct EvaluationReport {
  std::string model;
  double accuracy = 0.0;
  std::uint64_t n = 0;
  std::vector<ClassMetrics> per_class;
  Averages macro;
  Averages weighted;
  ConfusionCounts counts;
  ConfusionMatrix matrix;
};

inline EvaluationReport build_report(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                     const std::vector<std::string>& labels, const std::string& model) {
  const auto cm = confusion(y_true, y_pred, labels.size());
  EvaluationReport r;
  r.model = model;
  r.matrix = cm;
  r.accuracy = accuracy(cm);
  r.n = cm.total();
  r.counts = micro_ovr_counts(cm);
  const auto p = precision_per_class(cm);
  const auto rc = recall_per_class(cm);
  const auto f = f1_per_class(cm);
  std::vector<std::uint64_t> supports(labels.size());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    supports[c] = cm.row_sum(c);
    r.per_class.push_back({labels[c], p.values[c], rc.values[c], f.values[c], supports[c], p.zero_division[c],
                           rc.zero_division[c], f.zero_division[c]});
  }
  r.macro = {macro_avg(p.values), macro_avg(rc.values), macro_avg(f.values), r.n};
  r.weighted = {weighted_avg(p.values, supports), weighted_avg(rc.values, supports), weighted_avg(f.values, supports),
                r.n};
  return r;
}

/// Aligned per-model table: per-class rows, macro and weighted rows, then
/// accuracy and the micro TP/FP/TN/FN counts. Zero-division cells carry '*'.
inline std::string format_report(const EvaluationReport& r) {
  std::ostringstream out;
  out << "model: " << r.model << "\n";
  out << std::left << std::setw(14) << "" << std::right << std::setw(10) << "precision" << std::setw(10) << "recall"
      << std::setw(10) << "f1-score" << std::setw(10) << "support" << "\n";
  auto cell = [&](double v, bool flagged) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(2) << v << (flagged ? "*" : "");
    out << std::setw(10) << c.str();
  };
  for (const auto& c : r.per_class) {
    out << std::left << std::setw(14) << c.label << std::right;
    cell(c.precision, c.precision_zero_division);
    cell(c.recall, c.recall_zero_division);
    cell(c.f1, c.f1_zero_division);
    out << std::setw(10) << c.support << "\n";
  }
  for (const auto& [name, a] : {std::pair{"macro avg", r.macro}, std::pair{"weighted avg", r.weighted}}) {
    out << std::left << std::setw(14) << name << std::right;
    cell(a.precision, false);
    cell(a.recall, false);
    cell(a.f1, false);
    out << std::setw(10) << a.support << "\n";
  }
  out << std::fixed << std::setprecision(2) << "accuracy: " << 100.0 * r.accuracy << "%\n";
  out << "TP " << r.counts.tp << "  FP " << r.counts.fp << "  TN " << r.counts.tn << "  FN " << r.counts.fn << "\n";
  return out.str();
}

/// One row per model: accuracy, weighted P/R/F1, micro counts.
inline std::string format_comparison(const std::vector<EvaluationReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "model" << std::right << std::setw(10) << "accuracy" << std::setw(11)
      << "w-prec" << std::setw(11) << "w-recall" << std::setw(11) << "w-f1" << std::setw(6) << "TP" << std::setw(6)
      << "FP" << std::setw(6) << "TN" << std::setw(6) << "FN" << "\n";
  out << std::fixed << std::setprecision(2);
  for (const auto& r : reports) {
    out << std::left << std::setw(8) << r.model << std::right << std::setw(9) << 100.0 * r.accuracy << "%"
        << std::setw(10) << 100.0 * r.weighted.precision << "%" << std::setw(10) << 100.0 * r.weighted.recall << "%"
        << std::setw(10) << 100.0 * r.weighted.f1 << "%" << std::setw(6) << r.counts.tp << std::setw(6) << r.counts.fp
        << std::setw(6) << r.counts.tn << std::setw(6) << r.counts.fn << "\n";
  }
  return out.str();
}

}  // namespace careerpred::eval
