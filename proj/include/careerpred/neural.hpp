#pragma once

// MLP, 1-D CNN and LSTM classifiers with hand-written forward and backward
// passes, a shared mini-batch momentum-SGD training loop and per-epoch
// learning curves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "careerpred/error.hpp"
#include "careerpred/numkit.hpp"
#include "careerpred/prediction.hpp"
#include "careerpred/textprep.hpp"

namespace careerpred::neural {

using numkit::SeededRng;
using textprep::LabeledMatrix;

// ---------------------------------------------------------------------------
// Building blocks

/// A parameter tensor with its accumulated gradient and momentum buffer.
struct Tensor {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> value;
  std::vector<double> grad;
  std::vector<double> velocity;

  Tensor() = default;
  Tensor(std::string n, std::size_t r, std::size_t c)
      : name(std::move(n)), rows(r), cols(c), value(r * c, 0.0), grad(r * c, 0.0), velocity(r * c, 0.0) {}

  std::size_t size() const noexcept { return value.size(); }
  std::span<double> row(std::size_t r) { return {value.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {value.data() + r * cols, cols}; }
  std::span<double> grad_row(std::size_t r) { return {grad.data() + r * cols, cols}; }

  void fill_uniform(SeededRng& rng, double limit) {
    for (double& v : value) v = rng.uniform(-limit, limit);
  }
};

/// Fully connected layer. Weights are stored input-major (row i holds the
/// fan-out of input i) so zero inputs can be skipped in both passes.
struct DenseLayer {
  Tensor weight;
  Tensor bias;

  DenseLayer() = default;
  DenseLayer(const std::string& name, std::size_t in, std::size_t out)
      : weight(name + ".weight", in, out), bias(name + ".bias", 1, out) {}

  std::size_t in() const noexcept { return weight.rows; }
  std::size_t out() const noexcept { return weight.cols; }

  void forward(std::span<const double> x, std::span<double> y) const {
    std::copy(bias.value.begin(), bias.value.end(), y.begin());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      auto w = weight.row(i);
      for (std::size_t o = 0; o < y.size(); ++o) y[o] += xi * w[o];
    }
  }

  /// Accumulates parameter gradients; writes dL/dx into dx unless dx is empty.
  void backward(std::span<const double> x, std::span<const double> dy, std::span<double> dx) {
    for (std::size_t o = 0; o < dy.size(); ++o) bias.grad[o] += dy[o];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      if (xi != 0.0) {
        auto g = weight.grad_row(i);
        for (std::size_t o = 0; o < dy.size(); ++o) g[o] += xi * dy[o];
      }
      if (!dx.empty()) dx[i] = numkit::dot(weight.row(i), dy);
    }
  }
};

inline void he_init(DenseLayer& layer, SeededRng& rng) {
  layer.weight.fill_uniform(rng, std::sqrt(6.0 / static_cast<double>(layer.in())));
}

inline void glorot_init(DenseLayer& layer, SeededRng& rng) {
  layer.weight.fill_uniform(rng, std::sqrt(6.0 / static_cast<double>(layer.in() + layer.out())));
}

/// Inverted dropout: survivors are scaled by 1/(1-p) so inference needs no
/// rescaling. A null rng means inference mode (identity, mask of ones).
inline void apply_dropout(std::span<double> v, double rate, SeededRng* rng, std::vector<double>& mask) {
  mask.assign(v.size(), 1.0);
  if (rng == nullptr || rate <= 0.0) return;
  const double keep = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < v.size(); ++i) {
    mask[i] = rng->uniform01() < rate ? 0.0 : keep;
    v[i] *= mask[i];
  }
}

inline void check_rate(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error(ErrorKind::Input, "dropout rate must lie in [0,1)", std::to_string(rate));
}

inline void check_input(std::span<const double> x, std::size_t dim) {
  if (x.size() != dim) {
    throw Error(ErrorKind::Shape, "input dimension does not match the model",
                std::to_string(x.size()) + " != " + std::to_string(dim));
  }
}

/// Cross-entropy of a probability vector against class y.
inline double cross_entropy(std::span<const double> probs, int y) {
  return -std::log(std::max(probs[static_cast<std::size_t>(y)], 1e-300));
}

/// A count vector laid out as a one-channel sequence in vocabulary order.
struct Sequence {
  std::size_t length = 0;
  std::size_t channels = 1;
  std::vector<double> values;  // position-major

  std::vector<double> flatten() const { return values; }
};

inline Sequence reshape_input(const textprep::CountVector& x) { return {x.dimension, 1, x.dense()}; }

// ---------------------------------------------------------------------------
// MLP

struct MlpArch {
  std::vector<std::size_t> hidden = {256, 128, 64, 32};
  std::vector<double> dropout = {0.3, 0.3, 0.3, 0.3};
};

class MlpModel {
 public:
  struct Cache {
    std::vector<std::vector<double>> act;   // post-ReLU, post-dropout per hidden layer
    std::vector<std::vector<double>> mask;  // dropout masks
    std::vector<double> probs;
  };

  MlpArch arch;
  std::size_t input_dim = 0;
  int num_classes = 0;
  std::vector<DenseLayer> hidden;
  DenseLayer output;

  MlpModel() = default;
  MlpModel(MlpArch a, std::size_t input, int classes, SeededRng& rng)
      : arch(std::move(a)), input_dim(input), num_classes(classes) {
    if (arch.hidden.size() != 4 || arch.dropout.size() != 4) {
      throw Error(ErrorKind::Input, "the MLP has exactly four hidden layers");
    }
    for (double r : arch.dropout) check_rate(r);
    std::size_t prev = input;
    for (std::size_t l = 0; l < 4; ++l) {
      hidden.emplace_back("hidden" + std::to_string(l + 1), prev, arch.hidden[l]);
      he_init(hidden.back(), rng);
      prev = arch.hidden[l];
    }
    output = DenseLayer("output", prev, static_cast<std::size_t>(classes));
    glorot_init(output, rng);
  }

  std::vector<Tensor*> parameters() {
    std::vector<Tensor*> out;
    for (auto& h : hidden) {
      out.push_back(&h.weight);
      out.push_back(&h.bias);
    }
    out.push_back(&output.weight);
    out.push_back(&output.bias);
    return out;
  }

  void forward(std::span<const double> x, Cache& cache, SeededRng* dropout_rng) const {
    check_input(x, input_dim);
    cache.act.resize(4);
    cache.mask.resize(4);
    std::span<const double> in = x;
    for (std::size_t l = 0; l < 4; ++l) {
      auto& a = cache.act[l];
      a.assign(hidden[l].out(), 0.0);
      hidden[l].forward(in, a);
      for (double& v : a) v = numkit::relu(v);
      apply_dropout(a, arch.dropout[l], dropout_rng, cache.mask[l]);
      in = a;
    }
    std::vector<double> logits(output.out());
    output.forward(in, logits);
    cache.probs = numkit::softmax(logits);
  }

  void backward(std::span<const double> x, int y, const Cache& cache) {
    std::vector<double> delta = cache.probs;
    delta[static_cast<std::size_t>(y)] -= 1.0;
    std::vector<double> d_in(output.in());
    output.backward(cache.act[3], delta, d_in);
    for (std::size_t l = 4; l-- > 0;) {
      // mask is 0 wherever dropout or ReLU zeroed the unit.
      for (std::size_t i = 0; i < d_in.size(); ++i) {
        if (cache.act[l][i] <= 0.0) d_in[i] = 0.0;
        else d_in[i] *= cache.mask[l][i];
      }
      std::span<const double> in = l == 0 ? x : std::span<const double>(cache.act[l - 1]);
      std::vector<double> d_prev(l == 0 ? 0 : hidden[l].in());
      hidden[l].backward(in, d_in, d_prev);
      d_in = std::move(d_prev);
    }
  }
};

// ---------------------------------------------------------------------------
// CNN: Conv1D -> MaxPool -> Dropout -> Flatten -> Dense -> Output

struct CnnArch {
  std::size_t kernel = 3;
  std::size_t filters = 16;
  std::size_t pool = 2;
  double dropout = 0.5;
  std::size_t dense = 64;
};

class CnnModel {
 public:
  struct Cache {
    std::vector<double> conv;        // post-ReLU, conv_len x filters
    std::vector<double> pooled;      // pooled_len x filters, post-dropout (the flattened vector)
    std::vector<std::size_t> argmax; // conv position feeding each pooled cell
    std::vector<double> mask;
    std::vector<double> dense;       // post-ReLU
    std::vector<double> probs;
  };

  CnnArch arch;
  std::size_t input_dim = 0;
  int num_classes = 0;
  Tensor conv_weight;  // filters x kernel
  Tensor conv_bias;    // 1 x filters
  DenseLayer dense;
  DenseLayer output;

  CnnModel() = default;
  CnnModel(CnnArch a, std::size_t input, int classes, SeededRng& rng)
      : arch(a), input_dim(input), num_classes(classes) {
    check_rate(arch.dropout);
    if (arch.kernel < 1 || arch.pool < 1 || input < arch.kernel || conv_len() < arch.pool) {
      throw Error(ErrorKind::Shape, "sequence too short for the convolution and pooling windows",
                  std::to_string(input));
    }
    conv_weight = Tensor("conv.weight", arch.filters, arch.kernel);
    conv_bias = Tensor("conv.bias", 1, arch.filters);
    conv_weight.fill_uniform(rng, std::sqrt(6.0 / static_cast<double>(arch.kernel)));
    dense = DenseLayer("dense", pooled_len() * arch.filters, arch.dense);
    he_init(dense, rng);
    output = DenseLayer("output", arch.dense, static_cast<std::size_t>(classes));
    glorot_init(output, rng);
  }

  std::size_t conv_len() const { return input_dim - arch.kernel + 1; }
  std::size_t pooled_len() const { return conv_len() / arch.pool; }

  std::vector<Tensor*> parameters() {
    return {&conv_weight, &conv_bias, &dense.weight, &dense.bias, &output.weight, &output.bias};
  }

  void forward(std::span<const double> x, Cache& cache, SeededRng* dropout_rng) const {
    check_input(x, input_dim);
    const std::size_t F = arch.filters;
    const std::size_t K = arch.kernel;
    const std::size_t Lc = conv_len();
    const std::size_t Lp = pooled_len();
    cache.conv.assign(Lc * F, 0.0);
    for (std::size_t t = 0; t < Lc; ++t) {
      for (std::size_t f = 0; f < F; ++f) {
        double z = conv_bias.value[f];
        for (std::size_t k = 0; k < K; ++k) z += conv_weight.value[f * K + k] * x[t + k];
        cache.conv[t * F + f] = numkit::relu(z);
      }
    }
    cache.pooled.assign(Lp * F, 0.0);
    cache.argmax.assign(Lp * F, 0);
    for (std::size_t p = 0; p < Lp; ++p) {
      for (std::size_t f = 0; f < F; ++f) {
        std::size_t best = p * arch.pool;
        for (std::size_t t = best + 1; t < (p + 1) * arch.pool; ++t) {
          if (cache.conv[t * F + f] > cache.conv[best * F + f]) best = t;
        }
        cache.argmax[p * F + f] = best;
        cache.pooled[p * F + f] = cache.conv[best * F + f];
      }
    }
    apply_dropout(cache.pooled, arch.dropout, dropout_rng, cache.mask);
    cache.dense.assign(dense.out(), 0.0);
    dense.forward(cache.pooled, cache.dense);
    for (double& v : cache.dense) v = numkit::relu(v);
    std::vector<double> logits(output.out());
    output.forward(cache.dense, logits);
    cache.probs = numkit::softmax(logits);
  }

  void backward(std::span<const double> x, int y, const Cache& cache) {
    std::vector<double> delta = cache.probs;
    delta[static_cast<std::size_t>(y)] -= 1.0;
    std::vector<double> d_dense(dense.out());
    output.backward(cache.dense, delta, d_dense);
    for (std::size_t i = 0; i < d_dense.size(); ++i) {
      if (cache.dense[i] <= 0.0) d_dense[i] = 0.0;
    }
    std::vector<double> d_pooled(cache.pooled.size());
    dense.backward(cache.pooled, d_dense, d_pooled);
    const std::size_t F = arch.filters;
    const std::size_t K = arch.kernel;
    for (std::size_t cell = 0; cell < d_pooled.size(); ++cell) {
      const double g = d_pooled[cell] * cache.mask[cell];
      if (g == 0.0) continue;
      const std::size_t f = cell % F;
      const std::size_t t = cache.argmax[cell];
      if (cache.conv[t * F + f] <= 0.0) continue;
      conv_bias.grad[f] += g;
      for (std::size_t k = 0; k < K; ++k) conv_weight.grad[f * K + k] += g * x[t + k];
    }
  }
};

// ---------------------------------------------------------------------------
// LSTM -> Dropout -> Dense -> Output, reading the sequence left to right

struct LstmArch {
  std::size_t hidden = 64;
  double dropout = 0.3;
  std::size_t dense = 32;
};

class LstmModel {
 public:
  /// Gate blocks in every 4H-wide vector: input, forget, candidate, output.
  struct Cache {
    std::vector<double> gates;  // T x 4H, post-activation
    std::vector<double> cell;   // (T+1) x H, row 0 is the zero initial state
    std::vector<double> state;  // (T+1) x H
    std::vector<double> last;   // h_T after dropout
    std::vector<double> mask;
    std::vector<double> dense;  // post-ReLU
    std::vector<double> probs;
  };

  LstmArch arch;
  std::size_t input_dim = 0;
  int num_classes = 0;
  Tensor input_weight;      // 1 x 4H
  Tensor recurrent_weight;  // H x 4H
  Tensor gate_bias;         // 1 x 4H
  DenseLayer dense;
  DenseLayer output;

  LstmModel() = default;
  LstmModel(LstmArch a, std::size_t input, int classes, SeededRng& rng)
      : arch(a), input_dim(input), num_classes(classes) {
    check_rate(arch.dropout);
    if (input < 1) throw Error(ErrorKind::Shape, "LSTM needs a non-empty sequence");
    const std::size_t H = arch.hidden;
    input_weight = Tensor("lstm.input_weight", 1, 4 * H);
    recurrent_weight = Tensor("lstm.recurrent_weight", H, 4 * H);
    gate_bias = Tensor("lstm.bias", 1, 4 * H);
    const double limit = 1.0 / std::sqrt(static_cast<double>(H));
    input_weight.fill_uniform(rng, limit);
    recurrent_weight.fill_uniform(rng, limit);
    for (std::size_t j = H; j < 2 * H; ++j) gate_bias.value[j] = 1.0;  // forget gate opens at start
    dense = DenseLayer("dense", H, arch.dense);
    he_init(dense, rng);
    output = DenseLayer("output", arch.dense, static_cast<std::size_t>(classes));
    glorot_init(output, rng);
  }

  std::vector<Tensor*> parameters() {
    return {&input_weight, &recurrent_weight, &gate_bias, &dense.weight, &dense.bias, &output.weight, &output.bias};
  }

  void forward(std::span<const double> x, Cache& cache, SeededRng* dropout_rng) const {
    check_input(x, input_dim);
    const std::size_t H = arch.hidden;
    const std::size_t G = 4 * H;
    const std::size_t T = x.size();
    cache.gates.assign(T * G, 0.0);
    cache.cell.assign((T + 1) * H, 0.0);
    cache.state.assign((T + 1) * H, 0.0);
    std::vector<double> z(G);
    for (std::size_t t = 0; t < T; ++t) {
      const double xt = x[t];
      for (std::size_t j = 0; j < G; ++j) z[j] = gate_bias.value[j] + input_weight.value[j] * xt;
      const double* h_prev = &cache.state[t * H];
      for (std::size_t i = 0; i < H; ++i) {
        const double hi = h_prev[i];
        if (hi == 0.0) continue;
        const double* w = &recurrent_weight.value[i * G];
        for (std::size_t j = 0; j < G; ++j) z[j] += hi * w[j];
      }
      double* g = &cache.gates[t * G];
      const double* c_prev = &cache.cell[t * H];
      double* c = &cache.cell[(t + 1) * H];
      double* h = &cache.state[(t + 1) * H];
      for (std::size_t k = 0; k < H; ++k) {
        g[k] = numkit::sigmoid(z[k]);
        g[H + k] = numkit::sigmoid(z[H + k]);
        g[2 * H + k] = std::tanh(z[2 * H + k]);
        g[3 * H + k] = numkit::sigmoid(z[3 * H + k]);
        c[k] = g[H + k] * c_prev[k] + g[k] * g[2 * H + k];
        h[k] = g[3 * H + k] * std::tanh(c[k]);
      }
    }
    cache.last.assign(cache.state.begin() + static_cast<std::ptrdiff_t>(T * H), cache.state.end());
    apply_dropout(cache.last, arch.dropout, dropout_rng, cache.mask);
    cache.dense.assign(dense.out(), 0.0);
    dense.forward(cache.last, cache.dense);
    for (double& v : cache.dense) v = numkit::relu(v);
    std::vector<double> logits(output.out());
    output.forward(cache.dense, logits);
    cache.probs = numkit::softmax(logits);
  }

  /// Backpropagation through time over the whole sequence.
  void backward(std::span<const double> x, int y, const Cache& cache) {
    const std::size_t H = arch.hidden;
    const std::size_t G = 4 * H;
    const std::size_t T = x.size();
    std::vector<double> delta = cache.probs;
    delta[static_cast<std::size_t>(y)] -= 1.0;
    std::vector<double> d_dense(dense.out());
    output.backward(cache.dense, delta, d_dense);
    for (std::size_t i = 0; i < d_dense.size(); ++i) {
      if (cache.dense[i] <= 0.0) d_dense[i] = 0.0;
    }
    std::vector<double> dh(H);
    dense.backward(cache.last, d_dense, dh);
    for (std::size_t k = 0; k < H; ++k) dh[k] *= cache.mask[k];

    std::vector<double> dc(H, 0.0);
    std::vector<double> dz(G);
    std::vector<double> dh_prev(H);
    for (std::size_t t = T; t-- > 0;) {
      const double* g = &cache.gates[t * G];
      const double* c_prev = &cache.cell[t * H];
      const double* c = &cache.cell[(t + 1) * H];
      const double* h_prev = &cache.state[t * H];
      for (std::size_t k = 0; k < H; ++k) {
        const double ig = g[k], fg = g[H + k], cand = g[2 * H + k], og = g[3 * H + k];
        const double tc = std::tanh(c[k]);
        const double d_o = dh[k] * tc;
        dc[k] += dh[k] * og * (1.0 - tc * tc);
        dz[k] = dc[k] * cand * ig * (1.0 - ig);
        dz[H + k] = dc[k] * c_prev[k] * fg * (1.0 - fg);
        dz[2 * H + k] = dc[k] * ig * (1.0 - cand * cand);
        dz[3 * H + k] = d_o * og * (1.0 - og);
        dc[k] *= fg;
      }
      const double xt = x[t];
      for (std::size_t j = 0; j < G; ++j) {
        gate_bias.grad[j] += dz[j];
        input_weight.grad[j] += dz[j] * xt;
      }
      for (std::size_t i = 0; i < H; ++i) {
        const double hi = h_prev[i];
        double* gw = &recurrent_weight.grad[i * G];
        const double* w = &recurrent_weight.value[i * G];
        // G is a multiple of 4; four partial sums let the loop vectorize.
        double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (std::size_t j = 0; j < G; j += 4) {
          gw[j] += hi * dz[j];
          gw[j + 1] += hi * dz[j + 1];
          gw[j + 2] += hi * dz[j + 2];
          gw[j + 3] += hi * dz[j + 3];
          a0 += w[j] * dz[j];
          a1 += w[j + 1] * dz[j + 1];
          a2 += w[j + 2] * dz[j + 2];
          a3 += w[j + 3] * dz[j + 3];
        }
        dh_prev[i] = (a0 + a1) + (a2 + a3);
      }
      std::swap(dh, dh_prev);
    }
  }
};

// ---------------------------------------------------------------------------
// Uniform surface

enum class ModelKind { Mlp, Cnn, Lstm };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Cnn: return "cnn";
    case ModelKind::Lstm: return "lstm";
  }
  return "?";
}

struct NeuralArch {
  MlpArch mlp;
  CnnArch cnn;
  LstmArch lstm;
};

using NeuralModel = std::variant<MlpModel, CnnModel, LstmModel>;

inline NeuralModel make_model(ModelKind kind, const NeuralArch& arch, std::size_t input_dim, int classes,
                              SeededRng& rng) {
  switch (kind) {
    case ModelKind::Mlp: return MlpModel(arch.mlp, input_dim, classes, rng);
    case ModelKind::Cnn: return CnnModel(arch.cnn, input_dim, classes, rng);
    case ModelKind::Lstm: return LstmModel(arch.lstm, input_dim, classes, rng);
  }
  throw Error(ErrorKind::Input, "unknown neural model kind");
}

inline ModelKind kind_of(const NeuralModel& m) { return static_cast<ModelKind>(m.index()); }

inline std::vector<Tensor*> parameters(NeuralModel& m) {
  return std::visit([](auto& model) { return model.parameters(); }, m);
}

inline std::size_t input_dim(const NeuralModel& m) {
  return std::visit([](const auto& model) { return model.input_dim; }, m);
}

/// Inference forward pass (dropout off) of one concrete model.
template <class Model>
Prediction infer(const Model& m, std::span<const double> x) {
  typename Model::Cache cache;
  m.forward(x, cache, nullptr);
  return make_prediction(cache.probs);
}

inline Prediction forward(const NeuralModel& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return infer(m, x); }, model);
}

inline Prediction forward(const NeuralModel& model, const textprep::CountVector& x) {
  const auto seq = reshape_input(x);
  return forward(model, seq.values);
}

/// Loss of one example; accumulates gradients when `accumulate` is set.
inline double loss_and_backward(NeuralModel& model, std::span<const double> x, int y, SeededRng* dropout_rng,
                                bool accumulate) {
  return std::visit(
      [&](auto& m) {
        typename std::decay_t<decltype(m)>::Cache cache;
        m.forward(x, cache, dropout_rng);
        const double loss = cross_entropy(cache.probs, y);
        if (accumulate) m.backward(x, y, cache);
        return loss;
      },
      model);
}

inline void zero_grad(NeuralModel& model) {
  for (auto* t : parameters(model)) std::fill(t->grad.begin(), t->grad.end(), 0.0);
}

inline std::vector<double> flatten_values(NeuralModel& model) {
  std::vector<double> out;
  for (auto* t : parameters(model)) out.insert(out.end(), t->value.begin(), t->value.end());
  return out;
}

inline void assign_values(NeuralModel& model, std::span<const double> flat) {
  std::size_t k = 0;
  for (auto* t : parameters(model)) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(k), flat.begin() + static_cast<std::ptrdiff_t>(k + t->size()),
              t->value.begin());
    k += t->size();
  }
}

/// Max relative error between backprop gradients and central differences
/// of the loss over every parameter (dropout off).
inline double gradient_check(NeuralModel model, std::span<const double> x, int y, double eps = 1e-5) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Oracle, "finite difference step must be positive");
  zero_grad(model);
  loss_and_backward(model, x, y, nullptr, true);
  std::vector<double> analytic, numeric;
  for (auto* t : parameters(model)) analytic.insert(analytic.end(), t->grad.begin(), t->grad.end());
  for (auto* t : parameters(model)) {
    for (auto& v : t->value) {
      const double saved = v;
      v = saved + eps;
      const double up = loss_and_backward(model, x, y, nullptr, false);
      v = saved - eps;
      const double down = loss_and_backward(model, x, y, nullptr, false);
      v = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw Error(ErrorKind::Oracle, "loss is not finite near the probe point", t->name);
      }
      numeric.push_back((up - down) / (2.0 * eps));
    }
  }
  return numkit::max_relative_error(analytic, numeric, 1e-6);
}

// ---------------------------------------------------------------------------
// Training

struct TrainingConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 8;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double validation_ratio = 0.2;
  std::uint64_t seed = 10;
};

struct EpochRecord {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct LearningCurve {
  std::vector<EpochRecord> epochs;

  /// epoch,train_loss,train_acc,val_loss,val_acc with a header row.
  std::string to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (std::size_t e = 0; e < epochs.size(); ++e) {
      const auto& r = epochs[e];
      out << e + 1 << ',' << r.train_loss << ',' << r.train_accuracy << ',' << r.val_loss << ',' << r.val_accuracy
          << '\n';
    }
    return out.str();
  }

  static LearningCurve from_csv(std::string_view text) {
    LearningCurve curve;
    std::istringstream in{std::string(text)};
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string cell;
      std::vector<double> v;
      while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
      if (v.size() != 5) throw Error(ErrorKind::Input, "learning curve rows need five columns", line);
      curve.epochs.push_back({v[1], v[2], v[3], v[4]});
    }
    return curve;
  }
};

struct EvalSummary {
  double loss = 0.0;
  double accuracy = 0.0;
};

inline EvalSummary evaluate(const NeuralModel& model, const LabeledMatrix& data) {
  if (data.size() == 0) return {};
  EvalSummary s;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = forward(model, data.x.row(i));
    s.loss += cross_entropy(p.distribution, data.y[i]);
    s.accuracy += p.label == data.y[i] ? 1.0 : 0.0;
  }
  s.loss /= static_cast<double>(data.size());
  s.accuracy /= static_cast<double>(data.size());
  return s;
}

struct TrainResult {
  NeuralModel model;
  LearningCurve curve;
};

/// Called after every epoch with its 1-based number; returning false stops
/// training and keeps the curve recorded so far.
using EpochCallback = std::function<bool(std::size_t, const EpochRecord&)>;

/// Carves a stratified validation set out of `data`, then runs `epochs`
/// passes of mini-batch momentum SGD on categorical cross-entropy. Every
/// random draw (split, initialization, batch order, dropout masks) comes
/// from one SeededRng(config.seed).
inline TrainResult train(ModelKind kind, const LabeledMatrix& data, const TrainingConfig& config,
                         const NeuralArch& arch = {}, const EpochCallback& on_epoch = {}) {
  if (config.epochs < 1) throw Error(ErrorKind::Input, "epochs must be at least 1");
  if (!(config.validation_ratio > 0.0 && config.validation_ratio < 1.0)) {
    throw Error(ErrorKind::Input, "validation ratio must lie in (0,1)");
  }
  std::vector<bool> present(static_cast<std::size_t>(data.num_classes), false);
  for (int y : data.y) present[static_cast<std::size_t>(y)] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw Error(ErrorKind::Training, "training needs at least two classes");
  }
  const auto split = textprep::stratified_split(data.y, 1.0 - config.validation_ratio, config.seed);
  const auto train_part = data.subset(split.train_indices);
  const auto val_part = data.subset(split.test_indices);
  if (config.batch_size < 1 || config.batch_size > train_part.size()) {
    throw Error(ErrorKind::Input, "batch size must lie in [1, training size]", std::to_string(config.batch_size));
  }

  SeededRng rng(config.seed);
  TrainResult result{make_model(kind, arch, data.dimension(), data.num_classes, rng), {}};
  auto& model = result.model;
  const auto params = parameters(model);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = numkit::permutation(train_part.size(), rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      zero_grad(model);
      for (std::size_t k = start; k < stop; ++k) {
        const auto i = order[k];
        loss_and_backward(model, train_part.x.row(i), train_part.y[i], &rng, true);
      }
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (auto* t : params) {
        for (std::size_t j = 0; j < t->size(); ++j) {
          t->velocity[j] = config.momentum * t->velocity[j] - config.learning_rate * t->grad[j] * scale;
          t->value[j] += t->velocity[j];
        }
      }
    }
    const auto tr = evaluate(model, train_part);
    const auto va = evaluate(model, val_part);
    if (!std::isfinite(tr.loss) || !std::isfinite(va.loss)) {
      throw Error(ErrorKind::Training, "training diverged (non-finite loss)", "epoch " + std::to_string(epoch + 1));
    }
    result.curve.epochs.push_back({tr.loss, tr.accuracy, va.loss, va.accuracy});
    if (on_epoch && !on_epoch(epoch + 1, result.curve.epochs.back())) break;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Over/underfitting diagnostics

enum class FitDiagnosis { Acceptable, OverfittingTrend, Underfitting };

inline std::string_view to_string(FitDiagnosis d) {
  switch (d) {
    case FitDiagnosis::Acceptable: return "acceptable";
    case FitDiagnosis::OverfittingTrend: return "overfitting-trend";
    case FitDiagnosis::Underfitting: return "underfitting";
  }
  return "?";
}

struct FitThresholds {
  double gap = 0.10;
  double train_accuracy_floor = 0.60;
};

struct OverfitReport {
  std::vector<double> gap;
  FitDiagnosis diagnosis = FitDiagnosis::Acceptable;
};

/// gap = train accuracy - validation accuracy per epoch. Underfitting when
/// the final train accuracy is below the floor; overfitting-trend when the
/// final quarter's mean gap exceeds the threshold and the least-squares slope
/// of validation loss over that quarter is positive.
inline OverfitReport overfit_gap(const LearningCurve& curve, const FitThresholds& thresholds = {}) {
  if (curve.epochs.empty()) throw Error(ErrorKind::Input, "learning curve is empty");
  OverfitReport report;
  for (const auto& r : curve.epochs) report.gap.push_back(r.train_accuracy - r.val_accuracy);
  if (curve.epochs.back().train_accuracy < thresholds.train_accuracy_floor) {
    report.diagnosis = FitDiagnosis::Underfitting;
    return report;
  }
  const std::size_t n = curve.epochs.size();
  const std::size_t q = std::max<std::size_t>(1, n / 4);
  double mean_gap = 0.0;
  for (std::size_t e = n - q; e < n; ++e) mean_gap += report.gap[e];
  mean_gap /= static_cast<double>(q);
  double slope = 0.0;
  if (q >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t e = n - q; e < n; ++e) {
      mx += static_cast<double>(e);
      my += curve.epochs[e].val_loss;
    }
    mx /= static_cast<double>(q);
    my /= static_cast<double>(q);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t e = n - q; e < n; ++e) {
      const double dx = static_cast<double>(e) - mx;
      sxy += dx * (curve.epochs[e].val_loss - my);
      sxx += dx * dx;
    }
    slope = sxy / sxx;
  }
  if (mean_gap > thresholds.gap && slope > 0.0) report.diagnosis = FitDiagnosis::OverfittingTrend;
  return report;
}

}  // namespace careerpred::neural
