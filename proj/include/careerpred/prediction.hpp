#pragma once

#include <vector>

#include "careerpred/numkit.hpp"

namespace careerpred {

/// A class distribution and its argmax (lowest code on ties).
struct Prediction {
  int label = 0;
  std::vector<double> distribution;
};

inline Prediction make_prediction(std::vector<double> distribution) {
  const auto label = static_cast<int>(numkit::argmax_tiebreak(distribution));
  return {label, std::move(distribution)};
}

}  // namespace careerpred
