#pragma once

// Colored 1D range reporting in rank space by reduction to three-sided
// queries, and colored prefix reporting on top of it.
//
// Sets C_1..C_m are laid out back to back: the j-th smallest color of C_i
// gets flat coordinate i' = j + |C_1| + ... + |C_{i-1}|. Each occurrence
// becomes the point (i', pred) with pred the flat coordinate of the previous
// occurrence of the same color, or 0. Query (a, b) asks
// [a', b'] x (-inf, a' - 1] with a' = 1 + P[a-1], b' = P[b] for prefix sums P:
// exactly the first occurrence of each color inside [a', b'] qualifies.
//
// Storage: colored range header [m, n, prefix sums, three-sided root];
// colored prefix header [string index root, colored range root].

#include <string_view>
#include <vector>

#include "emrr/dataset.hpp"
#include "emrr/emsim.hpp"
#include "emrr/point.hpp"
#include "emrr/strindex.hpp"
#include "emrr/threesided.hpp"

namespace emrr {

/// Reduced points in flat order: x = i', y = pred, payload = color.
std::vector<Point> reduce_colored(const ColoredDataset& data);

struct ColoredTrace {
  Word a_flat = 0;
  Word b_flat = 0;
  std::size_t raw_reported = 0;  // points returned by the three-sided query
  TopTrace top;
};

class ColoredRange {
 public:
  static BlockId build(Session& session, const ColoredDataset& data, const TopConfig& config = {});
  /// Union of C_a..C_b, ascending. a > b gives nothing; indices outside
  /// [1, m] are an error.
  static std::vector<Word> query(Session& session, BlockId root, std::size_t a, std::size_t b,
                                 ColoredTrace* trace = nullptr);
};

class ColoredPrefix {
 public:
  static BlockId build(Session& session, const Corpus& corpus, const TopConfig& config = {});
  /// Union of c(x) over the strings x that start with p, ascending.
  static std::vector<Word> query(Session& session, BlockId root, std::string_view p);
  static std::optional<RankInterval> rank_interval(Session& session, BlockId root, std::string_view p);
};

}  // namespace emrr
