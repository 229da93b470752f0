#pragma once

// Independent reference computations used as test oracles. None of them call
// into the library code they check.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline std::string source_path(const std::string& rel) { return std::string(CAREERPRED_SOURCE_DIR) + "/" + rel; }

/// Naive triple loop, no zero skipping.
inline std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b, std::size_t n,
                                  std::size_t k, std::size_t m) {
  std::vector<double> c(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < k; ++t) c[i * m + j] += a[i * k + t] * b[t * m + j];
  return c;
}

/// Metrics tallied straight from the label pairs, one class at a time.
struct Tally {
  double accuracy = 0.0;
  std::vector<double> precision, recall, f1;
  std::vector<std::uint64_t> support;
  double macro_p = 0.0, macro_r = 0.0, macro_f1 = 0.0;
  double weighted_p = 0.0, weighted_r = 0.0, weighted_f1 = 0.0;
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline Tally tally(const std::vector<int>& t, const std::vector<int>& p, int classes) {
  Tally out;
  const auto n = t.size();
  std::uint64_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += t[i] == p[i];
  out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  for (int c = 0; c < classes; ++c) {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool is_t = t[i] == c, is_p = p[i] == c;
      if (is_t && is_p) ++tp;
      else if (!is_t && is_p) ++fp;
      else if (is_t && !is_p) ++fn;
      else ++tn;
    }
    out.tp += tp;
    out.fp += fp;
    out.fn += fn;
    out.tn += tn;
    const double prec = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double rec = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double f = prec + rec == 0.0 ? 0.0 : 2.0 * prec * rec / (prec + rec);
    out.precision.push_back(prec);
    out.recall.push_back(rec);
    out.f1.push_back(f);
    out.support.push_back(tp + fn);
  }
  for (int c = 0; c < classes; ++c) {
    out.macro_p += out.precision[c] / classes;
    out.macro_r += out.recall[c] / classes;
    out.macro_f1 += out.f1[c] / classes;
  }
  double wp = 0.0, wr = 0.0, wf = 0.0;
  for (int c = 0; c < classes; ++c) {
    wp += out.precision[c] * static_cast<double>(out.support[c]);
    wr += out.recall[c] * static_cast<double>(out.support[c]);
    wf += out.f1[c] * static_cast<double>(out.support[c]);
  }
  out.weighted_p = wp / static_cast<double>(n);
  out.weighted_r = wr / static_cast<double>(n);
  out.weighted_f1 = wf / static_cast<double>(n);
  return out;
}

/// Multinomial naive Bayes posterior written as explicit products of
/// smoothed probabilities in long double.
inline std::vector<long double> bayes_posterior(const std::vector<std::vector<int>>& docs, const std::vector<int>& labels,
                                                int classes, double alpha, const std::vector<int>& query) {
  const std::size_t v = query.size();
  std::vector<long double> joint(classes, 0.0L);
  long double evidence = 0.0L;
  for (int c = 0; c < classes; ++c) {
    long double n_c = 0, total = 0;
    std::vector<long double> counts(v, 0.0L);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (labels[d] != c) continue;
      n_c += 1;
      for (std::size_t j = 0; j < v; ++j) {
        counts[j] += docs[d][j];
        total += docs[d][j];
      }
    }
    if (n_c == 0) continue;
    long double prod = n_c / static_cast<long double>(docs.size());
    for (std::size_t j = 0; j < v; ++j) {
      const long double theta = (counts[j] + alpha) / (total + alpha * static_cast<long double>(v));
      for (int r = 0; r < query[j]; ++r) prod *= theta;
    }
    joint[c] = prod;
    evidence += prod;
  }
  for (auto& x : joint) x /= evidence;
  return joint;
}

inline std::pair<std::vector<int>, std::vector<int>> random_labels(std::mt19937_64& gen, std::size_t n, int classes) {
  std::uniform_int_distribution<int> pick(0, classes - 1);
  std::vector<int> t(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = pick(gen);
    p[i] = pick(gen);
  }
  return {t, p};
}

}  // namespace oracle
