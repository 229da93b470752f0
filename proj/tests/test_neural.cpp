#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "careerpred/neural.hpp"
#include "fixtures.hpp"

using namespace careerpred;
using namespace careerpred::neural;

namespace {

MlpArch small_mlp(double dropout = 0.0) { return {{8, 8, 6, 4}, {dropout, dropout, dropout, dropout}}; }

std::vector<double> random_input(std::mt19937_64& gen, std::size_t n, double lo = -1.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(gen);
  return x;
}

LearningCurve curve_of(const std::vector<std::array<double, 4>>& rows) {
  LearningCurve c;
  for (const auto& r : rows) c.epochs.push_back({r[0], r[1], r[2], r[3]});
  return c;
}

}  // namespace

TEST(Reshape, DenseSequence) {
  textprep::CountVector x{{{1, 2}}, 4};
  const auto s = reshape_input(x);
  EXPECT_EQ(s.length, 4u);
  EXPECT_EQ(s.channels, 1u);
  EXPECT_EQ(s.values, (std::vector<double>{0, 2, 0, 0}));
  EXPECT_EQ(s.flatten(), x.dense());
  EXPECT_EQ(reshape_input(textprep::CountVector{{}, 3}).values, (std::vector<double>{0, 0, 0}));
}

TEST(Forward, ZeroOutputLayerIsUniform) {
  SeededRng rng(1);
  MlpModel m(small_mlp(), 5, 4, rng);
  std::fill(m.output.weight.value.begin(), m.output.weight.value.end(), 0.0);
  std::fill(m.output.bias.value.begin(), m.output.bias.value.end(), 0.0);
  const auto p = infer(m, std::vector<double>{1, 0, 2, 0, 3});
  for (double v : p.distribution) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Forward, DistributionsAreProperForEveryArchitecture) {
  std::mt19937_64 gen(2);
  NeuralArch arch;
  arch.mlp = small_mlp(0.3);
  arch.cnn.filters = 3;
  arch.cnn.dense = 5;
  arch.lstm.hidden = 4;
  arch.lstm.dense = 5;
  for (auto kind : {ModelKind::Mlp, ModelKind::Cnn, ModelKind::Lstm}) {
    SeededRng rng(3);
    const auto model = make_model(kind, arch, 10, 6, rng);
    for (int q = 0; q < 50; ++q) {
      const auto p = forward(model, random_input(gen, 10, 0.0, 4.0));
      double sum = 0.0;
      for (double v : p.distribution) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
    try {
      forward(model, std::vector<double>(9, 1.0));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Shape);
    }
  }
}

TEST(Dropout, ZeroRateMatchesInference) {
  std::mt19937_64 gen(4);
  NeuralArch arch;
  arch.mlp = small_mlp(0.0);
  arch.cnn.dropout = 0.0;
  arch.lstm.dropout = 0.0;
  arch.lstm.hidden = 4;
  for (auto kind : {ModelKind::Mlp, ModelKind::Cnn, ModelKind::Lstm}) {
    SeededRng init(5);
    auto model = make_model(kind, arch, 8, 3, init);
    const auto x = random_input(gen, 8, 0.0, 3.0);
    const auto inference = forward(model, x).distribution;
    std::visit(
        [&](auto& m) {
          typename std::decay_t<decltype(m)>::Cache cache;
          SeededRng drop(6);
          m.forward(x, cache, &drop);
          for (std::size_t c = 0; c < inference.size(); ++c) EXPECT_NEAR(cache.probs[c], inference[c], 1e-12);
        },
        model);
  }
}

TEST(Dropout, InvertedScalingPreservesExpectation) {
  SeededRng init(7);
  MlpModel m({{12, 4, 4, 4}, {0.3, 0.0, 0.0, 0.0}}, 6, 3, init);
  const std::vector<double> x{1, 0, 2, 1, 3, 0};
  MlpModel::Cache clean;
  m.forward(x, clean, nullptr);
  const auto& reference = clean.act[0];

  const int passes = 100000;
  std::vector<double> mean(reference.size(), 0.0);
  SeededRng drop(8);
  MlpModel::Cache cache;
  for (int k = 0; k < passes; ++k) {
    m.forward(x, cache, &drop);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += cache.act[0][i] / passes;
  }
  int active = 0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (reference[i] == 0.0) {
      EXPECT_EQ(mean[i], 0.0);
      continue;
    }
    ++active;
    EXPECT_NEAR(mean[i], reference[i], 0.01 * reference[i]) << "unit " << i;
  }
  EXPECT_GT(active, 0);
}

TEST(Lstm, GateActivationsStayInRange) {
  std::mt19937_64 gen(9);
  SeededRng init(10);
  LstmModel m({6, 0.0, 4}, 12, 3, init);
  LstmModel::Cache cache;
  for (double scale : {1.0, 10.0, 1e3}) {
    for (int q = 0; q < 20; ++q) {
      const auto x = random_input(gen, 12, -scale, scale);
      m.forward(x, cache, nullptr);
      const std::size_t H = 6;
      for (std::size_t t = 0; t < 12; ++t) {
        for (std::size_t k = 0; k < H; ++k) {
          const double* g = &cache.gates[t * 4 * H];
          for (std::size_t block : {0u, 1u, 3u}) {
            EXPECT_GE(g[block * H + k], 0.0);
            EXPECT_LE(g[block * H + k], 1.0);
            if (scale == 1.0) {
              EXPECT_GT(g[block * H + k], 0.0);
              EXPECT_LT(g[block * H + k], 1.0);
            }
          }
          EXPECT_GE(g[2 * H + k], -1.0);
          EXPECT_LE(g[2 * H + k], 1.0);
          if (scale == 1.0) {
            EXPECT_LT(std::abs(g[2 * H + k]), 1.0);
          }
        }
      }
    }
  }
}

TEST(GradientCheck, Mlp) {
  std::mt19937_64 gen(11);
  for (int draw = 0; draw < 5; ++draw) {
    SeededRng init(100 + draw);
    NeuralModel m = MlpModel(small_mlp(0.3), 6, 3, init);
    EXPECT_LT(gradient_check(m, random_input(gen, 6), draw % 3), 1e-4);
  }
}

TEST(GradientCheck, Cnn) {
  std::mt19937_64 gen(12);
  for (int draw = 0; draw < 5; ++draw) {
    SeededRng init(200 + draw);
    NeuralModel m = CnnModel({3, 2, 2, 0.5, 5}, 8, 3, init);
    EXPECT_LT(gradient_check(m, random_input(gen, 8), draw % 3), 1e-4);
  }
}

TEST(GradientCheck, Lstm) {
  std::mt19937_64 gen(13);
  for (int draw = 0; draw < 5; ++draw) {
    SeededRng init(300 + draw);
    NeuralModel m = LstmModel({4, 0.3, 5}, 6, 3, init);
    EXPECT_LT(gradient_check(m, random_input(gen, 6), draw % 3), 1e-4);
  }
}

TEST(Training, MemorizableFixture) {
  const auto data = fixture::memorizable();
  const auto result = train(ModelKind::Mlp, data, fixture::memorize_config(), fixture::memorize_arch());
  ASSERT_EQ(result.curve.epochs.size(), 50u);
  EXPECT_LT(result.curve.epochs.back().train_loss, 0.05);
  EXPECT_DOUBLE_EQ(result.curve.epochs.back().train_accuracy, 1.0);
  for (std::size_t i = 0; i < data.size(); ++i) EXPECT_EQ(forward(result.model, data.x.row(i)).label, data.y[i]);
}

TEST(Training, SingleEpochAndDeterminism) {
  const auto data = fixture::memorizable();
  TrainingConfig cfg;
  cfg.epochs = 1;
  NeuralArch arch;
  arch.mlp = small_mlp(0.3);
  arch.lstm.hidden = 4;
  arch.cnn.filters = 2;
  for (auto kind : {ModelKind::Mlp, ModelKind::Cnn, ModelKind::Lstm}) {
    auto a = train(kind, data, cfg, arch);
    auto b = train(kind, data, cfg, arch);
    EXPECT_EQ(a.curve.epochs.size(), 1u);
    EXPECT_EQ(flatten_values(a.model), flatten_values(b.model));
    EXPECT_EQ(a.curve.to_csv(), b.curve.to_csv());
  }
}

TEST(Training, CallbackStopsEarly) {
  TrainingConfig cfg;
  cfg.epochs = 20;
  NeuralArch arch;
  arch.mlp = small_mlp();
  std::size_t seen = 0;
  const auto r = train(ModelKind::Mlp, fixture::memorizable(), cfg, arch, [&](std::size_t epoch, const EpochRecord&) {
    seen = epoch;
    return epoch < 3;
  });
  EXPECT_EQ(seen, 3u);
  EXPECT_EQ(r.curve.epochs.size(), 3u);
}

TEST(Training, Errors) {
  const auto data = fixture::memorizable();
  TrainingConfig cfg;
  cfg.batch_size = 100;
  try {
    train(ModelKind::Mlp, data, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
  }
  auto one_class = data;
  std::fill(one_class.y.begin(), one_class.y.end(), 1);
  try {
    train(ModelKind::Mlp, one_class, TrainingConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Training);
  }
  SeededRng rng(1);
  EXPECT_THROW(MlpModel({{4, 4}, {0.0, 0.0}}, 3, 2, rng), Error);
  EXPECT_THROW(CnnModel({3, 2, 2, 0.5, 4}, 3, 2, rng), Error);
  EXPECT_THROW(LstmModel({4, 1.0, 4}, 3, 2, rng), Error);
}

TEST(LearningCurve, CsvRoundTrip) {
  const auto c = curve_of({{1.25, 0.5, 1.5, 0.25}, {0.1 + 0.2, 1.0 / 3.0, 0.7, 2.0 / 3.0}});
  const auto csv = c.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,train_loss,train_acc,val_loss,val_acc");
  EXPECT_EQ(LearningCurve::from_csv(csv).epochs, c.epochs);
  EXPECT_THROW(LearningCurve::from_csv("h\n1,2,3\n"), Error);
}

TEST(OverfitGap, Classifications) {
  std::vector<std::array<double, 4>> over;
  for (int e = 0; e < 20; ++e) over.push_back({0.05, 0.99, 0.8 + 0.05 * e, 0.70});
  const auto o = overfit_gap(curve_of(over));
  EXPECT_EQ(o.diagnosis, FitDiagnosis::OverfittingTrend);
  EXPECT_EQ(o.gap.size(), 20u);
  EXPECT_NEAR(o.gap.back(), 0.29, 1e-12);

  std::vector<std::array<double, 4>> under(20, {1.2, 0.40, 1.3, 0.38});
  EXPECT_EQ(overfit_gap(curve_of(under)).diagnosis, FitDiagnosis::Underfitting);

  std::vector<std::array<double, 4>> fine(20, {0.3, 0.88, 0.35, 0.85});
  EXPECT_EQ(overfit_gap(curve_of(fine)).diagnosis, FitDiagnosis::Acceptable);

  std::vector<std::array<double, 4>> falling;
  for (int e = 0; e < 20; ++e) falling.push_back({0.05, 0.99, 2.0 - 0.05 * e, 0.70});
  EXPECT_EQ(overfit_gap(curve_of(falling)).diagnosis, FitDiagnosis::Acceptable);

  EXPECT_THROW(overfit_gap(LearningCurve{}), Error);
}
