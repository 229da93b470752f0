#pragma once

// CART decision tree, one-vs-rest linear SVM with sigmoid calibration,
// multinomial logistic regression, k-nearest neighbours and multinomial
// naive Bayes behind one train / predict contract.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "careerpred/error.hpp"
#include "careerpred/numkit.hpp"
#include "careerpred/prediction.hpp"
#include "careerpred/textprep.hpp"

namespace careerpred::classical {

using numkit::DenseMatrix;
using textprep::LabeledMatrix;

using careerpred::Prediction;
using careerpred::make_prediction;

namespace detail {

inline void require_nonempty(const LabeledMatrix& train, const char* who) {
  if (train.size() == 0) throw Error(ErrorKind::Training, std::string(who) + ": empty training set");
  if (train.num_classes < 1) throw Error(ErrorKind::Training, std::string(who) + ": no classes");
  for (int y : train.y) {
    if (y < 0 || y >= train.num_classes) {
      throw Error(ErrorKind::Training, std::string(who) + ": label out of range", std::to_string(y));
    }
  }
}

inline void check_dimension(std::size_t got, std::size_t want) {
  if (got != want) {
    throw Error(ErrorKind::Shape, "input dimension does not match the model",
                std::to_string(got) + " != " + std::to_string(want));
  }
}

/// Nonzero (column, value) lists per row of a dense matrix.
struct SparseRows {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;

  explicit SparseRows(const DenseMatrix& x) : rows(x.rows()) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      auto row = x.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (row[c] != 0.0) rows[r].emplace_back(c, row[c]);
      }
    }
  }
};

inline double sparse_dot(const std::vector<std::pair<std::size_t, double>>& x, std::span<const double> w) {
  double s = 0.0;
  for (const auto& [j, v] : x) s += v * w[j];
  return s;
}

inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Decision tree

enum class SplitCriterion { Gini };

struct DtParams {
  std::optional<std::size_t> max_depth;  // nullopt = unlimited
  std::size_t min_samples_split = 2;
  SplitCriterion criterion = SplitCriterion::Gini;
};

struct DtNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> class_counts;

  bool is_leaf() const noexcept { return feature < 0; }
};

struct DecisionTreeModel {
  std::vector<DtNode> nodes;  // nodes[0] is the root
  std::size_t dimension = 0;
  int num_classes = 0;

  std::size_t depth() const {
    std::size_t best = 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
      auto [n, d] = stack.back();
      stack.pop_back();
      best = std::max(best, d);
      if (!nodes[n].is_leaf()) {
        stack.emplace_back(nodes[n].left, d + 1);
        stack.emplace_back(nodes[n].right, d + 1);
      }
    }
    return best;
  }
};

namespace detail {

/// n * gini(counts) = n - sum(c^2)/n
inline double scaled_gini(std::span<const double> counts, double n) {
  if (n <= 0.0) return 0.0;
  double sq = 0.0;
  for (double c : counts) sq += c * c;
  return n - sq / n;
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

inline SplitChoice best_split(const LabeledMatrix& train, const std::vector<std::size_t>& idx) {
  SplitChoice best;
  const auto C = static_cast<std::size_t>(train.num_classes);
  const auto n = static_cast<double>(idx.size());
  std::vector<std::pair<double, int>> column(idx.size());
  std::vector<double> total(C, 0.0);
  for (auto i : idx) total[train.y[i]] += 1.0;
  std::vector<double> left(C);
  std::vector<double> right(C);
  for (std::size_t f = 0; f < train.dimension(); ++f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double v = train.x(idx[k], f);
      column[k] = {v, train.y[idx[k]]};
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(lo < hi)) continue;
    std::sort(column.begin(), column.end());
    std::fill(left.begin(), left.end(), 0.0);
    right = total;
    for (std::size_t k = 0; k + 1 < column.size(); ++k) {
      left[column[k].second] += 1.0;
      right[column[k].second] -= 1.0;
      if (column[k].first == column[k + 1].first) continue;
      const double n_left = static_cast<double>(k + 1);
      const double impurity = scaled_gini(left, n_left) + scaled_gini(right, n - n_left);
      if (impurity < best.impurity - 1e-12) {
        best = {static_cast<int>(f), 0.5 * (column[k].first + column[k + 1].first), impurity};
      }
    }
  }
  return best;
}

}  // namespace detail

/// Greedy CART on Gini impurity. Samples with x[feature] <= threshold go
/// left. A node is split whenever it is impure and a split with two
/// non-empty children exists, even if impurity does not drop (XOR needs it).
inline DecisionTreeModel dt_train(const LabeledMatrix& train, const DtParams& params = {}) {
  detail::require_nonempty(train, "decision tree");
  if (params.criterion != SplitCriterion::Gini) throw Error(ErrorKind::Training, "only Gini is supported");
  DecisionTreeModel model;
  model.dimension = train.dimension();
  model.num_classes = train.num_classes;

  struct Pending {
    int node;
    std::vector<std::size_t> idx;
    std::size_t depth;
  };
  std::vector<std::size_t> all(train.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  model.nodes.emplace_back();
  std::vector<Pending> stack;
  stack.push_back({0, std::move(all), 0});
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    std::vector<double> counts(train.num_classes, 0.0);
    for (auto i : cur.idx) counts[train.y[i]] += 1.0;
    model.nodes[cur.node].class_counts = counts;

    const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
    const bool depth_capped = params.max_depth && cur.depth >= *params.max_depth;
    if (pure || depth_capped || cur.idx.size() < params.min_samples_split) continue;

    const auto split = detail::best_split(train, cur.idx);
    if (split.feature < 0) continue;

    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;
    for (auto i : cur.idx) {
      (train.x(i, split.feature) <= split.threshold ? left_idx : right_idx).push_back(i);
    }
    const int left = static_cast<int>(model.nodes.size());
    model.nodes.emplace_back();
    model.nodes.emplace_back();
    auto& node = model.nodes[cur.node];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = left + 1;
    stack.push_back({left + 1, std::move(right_idx), cur.depth + 1});
    stack.push_back({left, std::move(left_idx), cur.depth + 1});
  }
  return model;
}

inline Prediction dt_predict(const DecisionTreeModel& model, std::span<const double> x) {
  detail::check_dimension(x.size(), model.dimension);
  int n = 0;
  while (!model.nodes[n].is_leaf()) {
    const auto& node = model.nodes[n];
    n = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  const auto& counts = model.nodes[n].class_counts;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  std::vector<double> dist(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) dist[c] = counts[c] / total;
  return make_prediction(std::move(dist));
}

// ---------------------------------------------------------------------------
// k-nearest neighbours

struct KnnModel {
  DenseMatrix x;
  std::vector<int> y;
  int num_classes = 0;
  std::size_t k = 3;
};

inline KnnModel knn_train(const LabeledMatrix& train, std::size_t k = 3) {
  detail::require_nonempty(train, "knn");
  if (k < 1 || k > train.size()) {
    throw Error(ErrorKind::Training, "k must lie in [1, training size]", std::to_string(k));
  }
  return {train.x, train.y, train.num_classes, k};
}

/// Euclidean distance, uniform votes; distance ties go to the lower training
/// index and vote ties to the lower label code.
inline Prediction knn_predict(const KnnModel& model, std::span<const double> x) {
  detail::check_dimension(x.size(), model.x.cols());
  std::vector<std::pair<double, std::size_t>> dist(model.x.rows());
  for (std::size_t r = 0; r < model.x.rows(); ++r) {
    auto row = model.x.row(r);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double d = row[j] - x[j];
      s += d * d;
    }
    dist[r] = {s, r};
  }
  const auto k = std::min(model.k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<double> votes(model.num_classes, 0.0);
  for (std::size_t i = 0; i < k; ++i) votes[model.y[dist[i].second]] += 1.0;
  for (double& v : votes) v /= static_cast<double>(k);
  return make_prediction(std::move(votes));
}

// ---------------------------------------------------------------------------
// Multinomial naive Bayes

struct MultinomialNbModel {
  std::vector<double> log_prior;  // per class; -inf for classes absent in training
  DenseMatrix log_likelihood;     // classes x features
  double alpha = 1.0;
};

inline MultinomialNbModel mnb_train(const LabeledMatrix& train, double alpha = 1.0) {
  detail::require_nonempty(train, "naive bayes");
  if (!(alpha > 0.0)) throw Error(ErrorKind::Training, "smoothing alpha must be positive", std::to_string(alpha));
  const auto C = static_cast<std::size_t>(train.num_classes);
  const auto d = train.dimension();
  DenseMatrix feature_counts(C, d);
  std::vector<double> docs(C, 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto c = static_cast<std::size_t>(train.y[i]);
    docs[c] += 1.0;
    auto row = train.x.row(i);
    auto acc = feature_counts.row(c);
    for (std::size_t j = 0; j < d; ++j) acc[j] += row[j];
  }
  MultinomialNbModel model{std::vector<double>(C), DenseMatrix(C, d), alpha};
  const auto n = static_cast<double>(train.size());
  for (std::size_t c = 0; c < C; ++c) {
    model.log_prior[c] = docs[c] > 0.0 ? std::log(docs[c] / n) : -std::numeric_limits<double>::infinity();
    auto counts = feature_counts.row(c);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const double denom = std::log(total + alpha * static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) model.log_likelihood(c, j) = std::log(counts[j] + alpha) - denom;
  }
  return model;
}

/// Joint log scores normalized by log-sum-exp; never leaves log space until
/// the final softmax.
inline Prediction mnb_predict(const MultinomialNbModel& model, std::span<const double> x) {
  detail::check_dimension(x.size(), model.log_likelihood.cols());
  std::vector<double> scores(model.log_prior.size());
  for (std::size_t c = 0; c < scores.size(); ++c) {
    double s = model.log_prior[c];
    if (std::isfinite(s)) {
      auto ll = model.log_likelihood.row(c);
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] != 0.0) s += x[j] * ll[j];
      }
    }
    scores[c] = s;
  }
  return make_prediction(numkit::softmax(scores));
}

// ---------------------------------------------------------------------------
// Multinomial logistic regression

struct LrParams {
  double learning_rate = 0.1;
  std::size_t max_iters = 3000;
  double tolerance = 1e-7;
  double lambda = 1e-4;
  std::uint64_t seed = 10;
};

struct LogisticRegressionModel {
  DenseMatrix weights;  // classes x features
  std::vector<double> bias;
  std::uint64_t seed = 10;
  double lambda = 1e-4;
};

struct LossAndGradient {
  double loss = 0.0;
  DenseMatrix grad_weights;
  std::vector<double> grad_bias;
};

/// Mean cross-entropy + (lambda/2)||W||^2 and its exact gradient. The bias
/// is not regularized.
inline LossAndGradient lr_loss_and_gradient(const LogisticRegressionModel& m, const LabeledMatrix& data) {
  const auto C = m.weights.rows();
  const auto d = m.weights.cols();
  const detail::SparseRows rows(data.x);
  LossAndGradient out{0.0, DenseMatrix(C, d), std::vector<double>(C, 0.0)};
  const double inv_n = 1.0 / static_cast<double>(data.size());
  std::vector<double> logits(C);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t c = 0; c < C; ++c) logits[c] = m.bias[c] + detail::sparse_dot(rows.rows[i], m.weights.row(c));
    const auto p = numkit::softmax(logits);
    const auto yi = static_cast<std::size_t>(data.y[i]);
    const double peak = *std::max_element(logits.begin(), logits.end());
    double lse = 0.0;
    for (double z : logits) lse += std::exp(z - peak);
    out.loss += (peak + std::log(lse) - logits[yi]) * inv_n;
    for (std::size_t c = 0; c < C; ++c) {
      const double r = (p[c] - (c == yi ? 1.0 : 0.0)) * inv_n;
      out.grad_bias[c] += r;
      auto g = out.grad_weights.row(c);
      for (const auto& [j, v] : rows.rows[i]) g[j] += r * v;
    }
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < m.weights.values().size(); ++k) {
    const double w = m.weights.values()[k];
    sq += w * w;
    out.grad_weights.values()[k] += m.lambda * w;
  }
  out.loss += 0.5 * m.lambda * sq;
  return out;
}

/// Full-batch gradient descent from small uniform weights drawn with
/// SeededRng(seed). Stops once an iteration improves the loss by less than
/// `tolerance`. The optional trace receives the loss before every step.
inline LogisticRegressionModel lr_train(const LabeledMatrix& train, const LrParams& params = {},
                                        std::vector<double>* loss_trace = nullptr) {
  detail::require_nonempty(train, "logistic regression");
  if (!(params.learning_rate > 0.0)) throw Error(ErrorKind::Training, "learning rate must be positive");
  const auto C = static_cast<std::size_t>(train.num_classes);
  LogisticRegressionModel m{DenseMatrix(C, train.dimension()), std::vector<double>(C, 0.0), params.seed,
                            params.lambda};
  numkit::SeededRng rng(params.seed);
  for (double& w : m.weights.values()) w = rng.uniform(-0.01, 0.01);

  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < params.max_iters; ++it) {
    auto lg = lr_loss_and_gradient(m, train);
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorKind::Divergence, "logistic regression loss is not finite; try a smaller learning rate",
                  "iteration " + std::to_string(it));
    }
    if (loss_trace) loss_trace->push_back(lg.loss);
    if (previous - lg.loss < params.tolerance) break;
    previous = lg.loss;
    for (std::size_t k = 0; k < m.weights.values().size(); ++k) {
      m.weights.values()[k] -= params.learning_rate * lg.grad_weights.values()[k];
    }
    for (std::size_t c = 0; c < C; ++c) m.bias[c] -= params.learning_rate * lg.grad_bias[c];
  }
  return m;
}

inline Prediction lr_predict(const LogisticRegressionModel& m, std::span<const double> x) {
  detail::check_dimension(x.size(), m.weights.cols());
  std::vector<double> logits(m.bias.size());
  for (std::size_t c = 0; c < logits.size(); ++c) logits[c] = m.bias[c] + numkit::dot(m.weights.row(c), x);
  return make_prediction(numkit::softmax(logits));
}

// ---------------------------------------------------------------------------
// Linear SVM (one-vs-rest) with sigmoid calibration

struct SvmParams {
  double learning_rate = 0.05;
  std::size_t epochs = 100;
  double lambda = 1e-3;
};

struct LinearSvmModel {
  DenseMatrix weights;  // classes x features
  std::vector<double> bias;
  std::vector<double> calib_a;
  std::vector<double> calib_b;
  double lambda = 1e-3;

  double score(std::size_t c, std::span<const double> x) const { return bias[c] + numkit::dot(weights.row(c), x); }
};

/// (1/N) sum max(0, 1 - y (w.x + b)) + (lambda/2)||w||^2 for y in {-1,+1}.
inline double hinge_objective(std::span<const double> w, double b, const LabeledMatrix& data,
                              const std::vector<double>& signs, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    loss += std::max(0.0, 1.0 - signs[i] * (numkit::dot(w, data.x.row(i)) + b));
  }
  return loss / static_cast<double>(data.size()) + 0.5 * lambda * numkit::dot(w, w);
}

/// Subgradient of hinge_objective; writes d/dw into grad_w and returns d/db.
/// Exact gradient wherever no margin equals 1.
inline double hinge_subgradient(std::span<const double> w, double b, const LabeledMatrix& data,
                                const std::vector<double>& signs, double lambda, std::span<double> grad_w) {
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] = lambda * w[j];
  double grad_b = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto row = data.x.row(i);
    if (signs[i] * (numkit::dot(w, row) + b) < 1.0) {
      for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] -= signs[i] * row[j] * inv_n;
      grad_b -= signs[i] * inv_n;
    }
  }
  return grad_b;
}

struct SigmoidCalibration {
  double a = 0.0;
  double b = 0.0;
};

/// Fits p = sigmoid(a*score + b) by Newton's method with backtracking on the
/// logistic loss. Targets are the one-vs-rest labels softened to
/// (N+ + 1)/(N+ + 2) and 1/(N- + 2), which keeps (a, b) finite when the
/// training scores separate perfectly.
inline SigmoidCalibration fit_sigmoid(const std::vector<double>& scores, const std::vector<bool>& positive) {
  double n_pos = 0.0;
  double n_neg = 0.0;
  for (bool p : positive) (p ? n_pos : n_neg) += 1.0;
  const double hi = (n_pos + 1.0) / (n_pos + 2.0);
  const double lo = 1.0 / (n_neg + 2.0);
  std::vector<double> t(scores.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = positive[i] ? hi : lo;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double z = a * scores[i] + b;
      f += detail::softplus(z) - t[i] * z;
    }
    return f;
  };
  SigmoidCalibration cal{0.0, std::log((n_pos + 1.0) / (n_neg + 1.0))};
  double f = objective(cal.a, cal.b);
  for (int it = 0; it < 100; ++it) {
    double ga = 0.0, gb = 0.0, haa = 1e-12, hab = 0.0, hbb = 1e-12;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double p = numkit::sigmoid(cal.a * scores[i] + cal.b);
      const double r = p - t[i];
      const double w = p * (1.0 - p);
      ga += r * scores[i];
      gb += r;
      haa += w * scores[i] * scores[i];
      hab += w * scores[i];
      hbb += w;
    }
    if (std::abs(ga) < 1e-9 && std::abs(gb) < 1e-9) break;
    const double det = haa * hbb - hab * hab;
    const double da = -(hbb * ga - hab * gb) / det;
    const double db = -(-hab * ga + haa * gb) / det;
    const double slope = ga * da + gb * db;
    double step = 1.0;
    bool moved = false;
    while (step >= 1e-10) {
      const double fa = cal.a + step * da;
      const double fb = cal.b + step * db;
      const double fn = objective(fa, fb);
      if (fn <= f + 1e-4 * step * slope) {
        cal = {fa, fb};
        f = fn;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return cal;
}

/// One binary SVM per class, trained by epoch-ordered stochastic subgradient
/// steps over the samples in index order with step lr / (1 + lr*lambda*t).
/// `objective_trace`, when given, receives per class the regularized hinge
/// objective at epoch 0 (all-zero start) and after every epoch.
inline LinearSvmModel svm_train(const LabeledMatrix& train, const SvmParams& params = {},
                                std::vector<std::vector<double>>* objective_trace = nullptr) {
  detail::require_nonempty(train, "svm");
  std::vector<bool> present(train.num_classes, false);
  for (int y : train.y) present[y] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw Error(ErrorKind::Training, "svm needs at least two classes in the training data");
  }
  const auto C = static_cast<std::size_t>(train.num_classes);
  const auto d = train.dimension();
  const detail::SparseRows rows(train.x);
  LinearSvmModel model{DenseMatrix(C, d), std::vector<double>(C, 0.0), std::vector<double>(C, 0.0),
                       std::vector<double>(C, 0.0), params.lambda};
  if (objective_trace) objective_trace->assign(C, {});

  for (std::size_t c = 0; c < C; ++c) {
    std::vector<double> signs(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) signs[i] = train.y[i] == static_cast<int>(c) ? 1.0 : -1.0;
    // w = scale * v keeps the per-sample shrink O(1).
    std::vector<double> v(d, 0.0);
    double scale = 1.0;
    double b = 0.0;
    std::size_t t = 0;
    auto materialize = [&] {
      auto w = model.weights.row(c);
      for (std::size_t j = 0; j < d; ++j) w[j] = scale * v[j];
    };
    if (objective_trace) (*objective_trace)[c].push_back(hinge_objective(model.weights.row(c), b, train, signs, params.lambda));
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
      for (std::size_t i = 0; i < train.size(); ++i, ++t) {
        const double eta = params.learning_rate / (1.0 + params.learning_rate * params.lambda * static_cast<double>(t));
        const double margin = signs[i] * (scale * detail::sparse_dot(rows.rows[i], v) + b);
        scale *= (1.0 - eta * params.lambda);
        if (margin < 1.0) {
          for (const auto& [j, x] : rows.rows[i]) v[j] += eta * signs[i] * x / scale;
          b += eta * signs[i];
        }
        if (scale < 1e-9) {
          for (double& vj : v) vj *= scale;
          scale = 1.0;
        }
      }
      if (objective_trace) {
        materialize();
        (*objective_trace)[c].push_back(hinge_objective(model.weights.row(c), b, train, signs, params.lambda));
      }
    }
    materialize();
    model.bias[c] = b;
    if (!model.weights.all_finite() || !std::isfinite(b)) {
      throw Error(ErrorKind::Divergence, "svm weights are not finite; try a smaller learning rate",
                  "class " + std::to_string(c));
    }

    std::vector<double> scores(train.size());
    std::vector<bool> positive(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      scores[i] = model.score(c, train.x.row(i));
      positive[i] = signs[i] > 0.0;
    }
    const auto cal = fit_sigmoid(scores, positive);
    model.calib_a[c] = cal.a;
    model.calib_b[c] = cal.b;
  }
  return model;
}

/// Per-class calibrated probabilities, renormalized to sum to one.
inline Prediction svm_predict_proba(const LinearSvmModel& model, std::span<const double> x) {
  detail::check_dimension(x.size(), model.weights.cols());
  std::vector<double> p(model.bias.size());
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    p[c] = numkit::sigmoid(model.calib_a[c] * model.score(c, x) + model.calib_b[c]);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return make_prediction(std::move(p));
}

// ---------------------------------------------------------------------------
// Facade

using ClassicalModel =
    std::variant<DecisionTreeModel, LinearSvmModel, LogisticRegressionModel, KnnModel, MultinomialNbModel>;

inline Prediction predict(const DecisionTreeModel& m, std::span<const double> x) { return dt_predict(m, x); }
inline Prediction predict(const LinearSvmModel& m, std::span<const double> x) { return svm_predict_proba(m, x); }
inline Prediction predict(const LogisticRegressionModel& m, std::span<const double> x) { return lr_predict(m, x); }
inline Prediction predict(const KnnModel& m, std::span<const double> x) { return knn_predict(m, x); }
inline Prediction predict(const MultinomialNbModel& m, std::span<const double> x) { return mnb_predict(m, x); }

inline Prediction predict(const ClassicalModel& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

inline Prediction predict(const ClassicalModel& model, const textprep::CountVector& x) {
  const auto dense = x.dense();
  return predict(model, dense);
}

}  // namespace careerpred::classical
