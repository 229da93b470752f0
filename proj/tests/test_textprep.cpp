#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "careerpred/textprep.hpp"
#include "oracles.hpp"

using namespace careerpred;
using namespace careerpred::textprep;

namespace {

StopWordList nltk() { return StopWordList::load(oracle::source_path("data/stopwords.txt")); }

}  // namespace

TEST(StopWords, BundledList) {
  const auto s = nltk();
  EXPECT_EQ(s.words().size(), 179u);
  for (const char* w : {"the", "and", "of", "in", "a", "with"}) EXPECT_TRUE(s.contains(w)) << w;
  EXPECT_FALSE(s.contains("python"));
  EXPECT_THROW(StopWordList::parse("The\n"), Error);
  EXPECT_THROW(StopWordList::parse("two words\n"), Error);
}

TEST(Normalize, LowercasesSplitsAndFilters) {
  const auto s = nltk();
  EXPECT_EQ(normalize("Python, C++ and the Machine-Learning!", s),
            (std::vector<std::string>{"python", "c", "machine", "learning"}));
  EXPECT_TRUE(normalize("the and of", s).empty());
  EXPECT_TRUE(normalize("", s).empty());
  EXPECT_EQ(normalize("café  Node.js", StopWordList{}), (std::vector<std::string>{"café", "node", "js"}));
}

TEST(Normalize, Idempotent) {
  const auto s = nltk();
  for (const char* text : {"Web Development; MAD, UI/UX", "Data  Science & Analytics", "AI and ML in 2024"}) {
    const auto once = normalize(text, s);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    EXPECT_EQ(normalize(joined, s), once) << text;
  }
}

TEST(Vocabulary, SmallExample) {
  const auto v = build_vocabulary({{"a", "b"}, {"a"}});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.index_of("a"), 0u);
  EXPECT_EQ(v.index_of("b"), 1u);
  EXPECT_EQ(v.document_frequency(0), 2u);
  EXPECT_EQ(v.document_frequency(1), 1u);
  EXPECT_FALSE(v.index_of("c").has_value());
  EXPECT_EQ(v.export_text(), "a\t0\t2\nb\t1\t1\n");
}

TEST(Vocabulary, RepeatedTokenCountsOncePerDocument) {
  const auto v = build_vocabulary({{"x", "x", "x"}, {"y"}});
  EXPECT_EQ(v.document_frequency(*v.index_of("x")), 1u);
}

TEST(Vocabulary, EmptyInputs) {
  try {
    build_vocabulary({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyVocabulary);
  }
  try {
    build_vocabulary({{}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyVocabulary);
  }
  EXPECT_THROW(Vocabulary({{"a", 1}, {"a", 2}}), Error);
}

TEST(Vocabulary, LexicographicIndexAndDfBounds) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> letter(0, 7), len(0, 6);
  std::vector<std::vector<std::string>> docs(30);
  for (auto& d : docs) {
    for (int k = len(gen); k >= 0; --k) d.push_back(std::string(1, static_cast<char>('a' + letter(gen))) + "w");
  }
  const auto v = build_vocabulary(docs);
  EXPECT_TRUE(std::is_sorted(v.tokens().begin(), v.tokens().end()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t df = 0;
    for (const auto& d : docs) df += std::count(d.begin(), d.end(), v.token(i)) > 0;
    EXPECT_EQ(v.document_frequency(i), df);
    EXPECT_GE(df, 1u);
    EXPECT_LE(df, docs.size());
  }
}

TEST(Vectorize, CountsAndOov) {
  const auto v = build_vocabulary({{"a", "b"}, {"a"}});
  const auto cv = vectorize({"a", "a", "c", "b"}, v);
  EXPECT_EQ(cv.dimension, 2u);
  EXPECT_EQ(cv.dense(), (std::vector<double>{2, 1}));
  EXPECT_EQ(cv.total(), 3u);
  EXPECT_TRUE(vectorize({"zzz"}, v).entries.empty());
  for (const auto& [_, c] : cv.entries) EXPECT_GE(c, 1u);
}

TEST(Vectorize, TotalEqualsInVocabularyTokenCount) {
  const auto v = build_vocabulary({{"p", "q", "r"}});
  const std::vector<std::string> doc{"p", "x", "q", "p", "y", "r", "r", "r"};
  std::size_t in_vocab = 0;
  for (const auto& t : doc) in_vocab += v.index_of(t).has_value();
  EXPECT_EQ(vectorize(doc, v).total(), in_vocab);
}

TEST(LabelEncoder, FixedTable) {
  const std::vector<std::pair<std::string, int>> table = {{"AI", 0}, {"DS", 1},  {"DEV", 2},
                                                          {"SEC", 3}, {"SDE", 4}, {"UI / UX", 5}};
  for (const auto& [label, code] : table) {
    EXPECT_EQ(LabelEncoder::encode(label), code);
    EXPECT_EQ(LabelEncoder::decode(code), label);
  }
  EXPECT_EQ(LabelEncoder::encode("ui/ux"), 5);
  EXPECT_EQ(LabelEncoder::kNumClasses, 6);
  try {
    LabelEncoder::encode("ML");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Encoding);
  }
  EXPECT_THROW(LabelEncoder::decode(6), Error);
  EXPECT_THROW(LabelEncoder::decode(-1), Error);
}

TEST(Shuffle, DeterministicPermutation) {
  EXPECT_EQ(shuffle(5, 10), shuffle(5, 10));
  auto p = shuffle(5, 10);
  std::sort(p.begin(), p.end());
  EXPECT_EQ(p, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(shuffle(1, 3), std::vector<std::size_t>{0});
}

TEST(StratifiedSplit, SmallClassesRoundHalfUp) {
  const std::vector<int> labels = {0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  const auto s = stratified_split(labels, 0.8, 10);
  std::map<int, int> train;
  for (auto i : s.train_indices) ++train[labels[i]];
  EXPECT_EQ(train[0], 2);
  EXPECT_EQ(train[1], 8);
}

TEST(StratifiedSplit, Invariants) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> size(2, 40);
    std::vector<int> labels;
    std::map<int, int> per_class;
    for (int c = 0; c < 6; ++c) {
      const int n = size(gen);
      per_class[c] = n;
      for (int k = 0; k < n; ++k) labels.push_back(c);
    }
    std::shuffle(labels.begin(), labels.end(), gen);
    const double ratio = std::uniform_real_distribution<double>(0.1, 0.9)(gen);
    const auto s = stratified_split(labels, ratio, static_cast<std::uint64_t>(trial));

    std::vector<std::size_t> all(s.train_indices);
    all.insert(all.end(), s.test_indices.begin(), s.test_indices.end());
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);

    std::map<int, int> train;
    for (auto i : s.train_indices) ++train[labels[i]];
    for (const auto& [c, n] : per_class) {
      EXPECT_EQ(train[c], static_cast<int>(std::floor(ratio * n + 0.5 + 1e-9))) << "class " << c;
    }
    const auto again = stratified_split(labels, ratio, static_cast<std::uint64_t>(trial));
    EXPECT_EQ(again.train_indices, s.train_indices);
    EXPECT_EQ(again.test_indices, s.test_indices);
  }
}

TEST(StratifiedSplit, Errors) {
  try {
    stratified_split({0, 0, 1}, 0.8, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Stratification);
    EXPECT_EQ(e.context(), "1");
  }
  EXPECT_THROW(stratified_split({0, 0}, 1.0, 1), Error);
  EXPECT_THROW(stratified_split({0, 0}, 0.0, 1), Error);
}

TEST(LabeledMatrix, ToMatrixAndSubset) {
  const auto v = build_vocabulary({{"a", "b", "c"}});
  const auto m = to_matrix({vectorize({"a", "c", "c"}, v), vectorize({"b"}, v)}, {2, 5}, v.size(), 6);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.dimension(), 3u);
  EXPECT_EQ(m.x(0, 2), 2.0);
  EXPECT_EQ(m.x(1, 1), 1.0);
  const auto s = m.subset({1});
  EXPECT_EQ(s.y, std::vector<int>{5});
  EXPECT_EQ(s.x(0, 1), 1.0);
  EXPECT_THROW(to_matrix({vectorize({"a"}, v)}, {}, 3, 6), Error);
}
