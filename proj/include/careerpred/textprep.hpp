#pragma once

// Tokenization, stop words, bag-of-words vocabulary, count vectors, label
// encoding, seeded shuffling and stratified splitting.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "careerpred/corpus.hpp"
#include "careerpred/error.hpp"
#include "careerpred/numkit.hpp"

namespace careerpred::textprep {

class StopWordList {
 public:
  StopWordList() = default;
  explicit StopWordList(std::set<std::string> words) : words_(std::move(words)) {
    for (const auto& w : words_) {
      const bool bad = w.empty() || std::any_of(w.begin(), w.end(), [](unsigned char c) {
                         return std::isspace(c) || std::isupper(c);
                       });
      if (bad) throw Error(ErrorKind::Config, "stop words must be lowercase single tokens", w);
    }
  }

  /// One lowercase word per line; blank lines and '#' comments ignored.
  static StopWordList parse(std::string_view text) {
    std::set<std::string> words;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      auto w = corpus::trim(line);
      if (w.empty() || w.front() == '#') continue;
      words.insert(std::move(w));
    }
    return StopWordList(std::move(words));
  }

  static StopWordList load(const std::string& path) { return parse(corpus::read_text_file(path)); }

  bool contains(std::string_view w) const { return words_.contains(std::string(w)); }
  const std::set<std::string>& words() const noexcept { return words_; }

 private:
  std::set<std::string> words_;
};

/// Lowercase and split on every non-alphanumeric ASCII byte. Bytes >= 0x80
/// are kept inside tokens so UTF-8 words survive intact.
inline std::vector<std::string> normalize(std::string_view text, const StopWordList& stops) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !stops.contains(current)) tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

/// Tokens indexed in lexicographic order, with document frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// From (token, document_frequency) pairs; tokens must be unique.
  explicit Vocabulary(std::vector<std::pair<std::string, std::size_t>> entries) {
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].first == entries[i - 1].first) {
        throw Error(ErrorKind::Input, "duplicate vocabulary token", entries[i].first);
      }
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      index_.emplace(entries[i].first, i);
      tokens_.push_back(std::move(entries[i].first));
      df_.push_back(entries[i].second);
    }
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  std::optional<std::size_t> index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  std::size_t document_frequency(std::size_t i) const { return df_.at(i); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::size_t>& document_frequencies() const noexcept { return df_; }

  /// "token<TAB>index<TAB>df" per line, lexicographic.
  std::string export_text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      out += tokens_[i] + "\t" + std::to_string(i) + "\t" + std::to_string(df_[i]) + "\n";
    }
    return out;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.df_ == b.df_;
  }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> tokens_;
  std::vector<std::size_t> df_;
};

inline Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& corpus) {
  if (corpus.empty()) throw Error(ErrorKind::EmptyVocabulary, "cannot build a vocabulary from no documents");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    std::set<std::string_view> seen(doc.begin(), doc.end());
    for (auto t : seen) ++df[std::string(t)];
  }
  if (df.empty()) throw Error(ErrorKind::EmptyVocabulary, "every document is empty after normalization");
  return Vocabulary({df.begin(), df.end()});
}

/// Sparse term counts, entries sorted by index, every count >= 1.
struct CountVector {
  std::vector<std::pair<std::size_t, std::uint32_t>> entries;
  std::size_t dimension = 0;

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [_, c] : entries) s += c;
    return s;
  }

  std::vector<double> dense() const {
    std::vector<double> out(dimension, 0.0);
    for (const auto& [i, c] : entries) out[i] = c;
    return out;
  }

  friend bool operator==(const CountVector&, const CountVector&) = default;
};

/// Out-of-vocabulary tokens are ignored.
inline CountVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  std::map<std::size_t, std::uint32_t> counts;
  for (const auto& t : tokens) {
    if (auto i = vocab.index_of(t)) ++counts[*i];
  }
  return {{counts.begin(), counts.end()}, vocab.size()};
}

/// The fixed label code table: AI 0, DS 1, DEV 2, SEC 3, SDE 4, UI / UX 5.
class LabelEncoder {
 public:
  static constexpr int kNumClasses = static_cast<int>(corpus::kMasterFields.size());

  static int encode(std::string_view label) {
    const auto key = corpus::normalize_name(label);
    for (int code = 0; code < kNumClasses; ++code) {
      if (corpus::normalize_name(corpus::kMasterFields[code]) == key) return code;
    }
    throw Error(ErrorKind::Encoding, "unknown master field label", std::string(label));
  }

  static std::string decode(int code) {
    if (code < 0 || code >= kNumClasses) {
      throw Error(ErrorKind::Encoding, "label code out of range", std::to_string(code));
    }
    return std::string(corpus::kMasterFields[code]);
  }

  static std::vector<std::string> labels() { return {corpus::kMasterFields.begin(), corpus::kMasterFields.end()}; }
};

inline std::vector<std::size_t> shuffle(std::size_t n, std::uint64_t seed) {
  numkit::SeededRng rng(seed);
  return numkit::permutation(n, rng);
}

struct DatasetSplit {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

/// round-half-up(ratio * |class|) members of each class go to train. Classes
/// are visited in ascending code order and each class's members are permuted
/// by one rng seeded with `seed`; the final train and test lists are then
/// shuffled with the same rng so classes are interleaved.
inline DatasetSplit stratified_split(const std::vector<int>& labels, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::Input, "split ratio must lie in (0,1)", std::to_string(ratio));
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  for (const auto& [code, idx] : members) {
    if (idx.size() < 2) {
      throw Error(ErrorKind::Stratification,
                  "class " + std::to_string(code) + " has fewer than 2 members and cannot be stratified",
                  std::to_string(code));
    }
  }
  numkit::SeededRng rng(seed);
  DatasetSplit split;
  split.seed = seed;
  split.ratio = ratio;
  for (const auto& [code, idx] : members) {
    const auto perm = numkit::permutation(idx.size(), rng);
    const auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(idx.size()) + 0.5 + 1e-9));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < n_train ? split.train_indices : split.test_indices).push_back(idx[perm[k]]);
    }
  }
  for (auto* part : {&split.train_indices, &split.test_indices}) {
    const auto perm = numkit::permutation(part->size(), rng);
    std::vector<std::size_t> shuffled(part->size());
    for (std::size_t k = 0; k < perm.size(); ++k) shuffled[k] = (*part)[perm[k]];
    *part = std::move(shuffled);
  }
  return split;
}

/// Dense design matrix plus integer labels, the common training input of
/// every classifier.
struct LabeledMatrix {
  numkit::DenseMatrix x;
  std::vector<int> y;
  int num_classes = 0;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t dimension() const noexcept { return x.cols(); }

  LabeledMatrix subset(const std::vector<std::size_t>& indices) const {
    LabeledMatrix out{numkit::DenseMatrix(indices.size(), x.cols()), {}, num_classes};
    for (std::size_t k = 0; k < indices.size(); ++k) {
      auto src = x.row(indices[k]);
      std::copy(src.begin(), src.end(), out.x.row(k).begin());
      out.y.push_back(y[indices[k]]);
    }
    return out;
  }
};

inline LabeledMatrix to_matrix(const std::vector<CountVector>& vectors, const std::vector<int>& labels,
                               std::size_t dimension, int num_classes) {
  if (vectors.size() != labels.size()) throw Error(ErrorKind::Shape, "vector and label counts differ");
  LabeledMatrix out{numkit::DenseMatrix(vectors.size(), dimension), labels, num_classes};
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    for (const auto& [i, c] : vectors[r].entries) out.x(r, i) = c;
  }
  return out;
}

}  // namespace careerpred::textprep
