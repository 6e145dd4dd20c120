#pragma once

#include <string>
#include <utility>
#include <vector>

#include "emrr/emsim.hpp"

namespace emrr {

/// Sets C_1..C_m of colors; sets[i - 1] holds C_i as a strictly increasing list.
struct ColoredDataset {
  std::vector<std::vector<Word>> sets;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& s : sets) n += s.size();
    return n;
  }
  void validate() const;
};

/// A string with its color set c(x).
struct CorpusEntry {
  std::string text;
  std::vector<Word> colors;  // strictly increasing
};

/// Distinct strings, each mapped to a color set. Order is irrelevant to the
/// structures (they sort internally).
using Corpus = std::vector<CorpusEntry>;

void validate_corpus(const Corpus& corpus);

}  // namespace emrr
