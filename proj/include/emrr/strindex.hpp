#pragma once

// Block-resident compacted trie over a sorted set of distinct byte strings.
// Given a prefix p it returns the 1-based rank interval of the strings that
// start with p and their longest common prefix.
//
// Search is blind: descend by the single byte at each branching depth, then
// verify p once against the leftmost string of the reached node. Cost is a
// binary search over child keys per branching node on the path plus one
// string fetch.
//
// Storage:
//   strings: each string as [length, bytes packed floor(w/8) per word, high first]
//   offsets: rank - 1 -> word offset of that string
//   trie:    node records [depth, lo, hi, children, (key, offset) ...],
//            children sorted by key, key = byte + 1 and 0 for end of string
//   header:  [count, strings, offsets, trie, root offset]

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emrr/emsim.hpp"

namespace emrr {

struct RankInterval {
  std::size_t lo = 0;  // 1-based, inclusive
  std::size_t hi = 0;
  std::string lcp;

  friend bool operator==(const RankInterval&, const RankInterval&) = default;
};

class StringIndex {
 public:
  /// Strings are sorted internally; duplicates are an error.
  static BlockId build(Session& session, std::vector<std::string> strings);
  static std::optional<RankInterval> rank_interval(Session& session, BlockId root, std::string_view p);
  /// The string of 1-based rank r.
  static std::string fetch(Session& session, BlockId root, std::size_t r);
};

}  // namespace emrr
