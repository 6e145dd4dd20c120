#pragma once

// Three-sided reporting on the points stored with a node's children, for
// x-ranges that start and end on child boundaries.
//
// Points are swept by (y, x) into a persistent block list. For every child
// boundary lo_i, a history maps time -> block holding pred(lo_i) (the head
// when there is none); it gains an entry only when a split moves it. All
// histories share one predecessor structure keyed by i*(n+1) + time. The time
// map from y to list time also carries boundary 0's block, so ranges starting
// at the first child skip the history search.
//
// Header: [n, f, directory, time map, child lo -> index, child lo extent,
//          child hi extent, histories].

#include <vector>

#include "emrr/emsim.hpp"
#include "emrr/persist1d.hpp"
#include "emrr/point.hpp"

namespace emrr {

struct CatalogBuildInfo {
  BlockId root{};
  /// Per child boundary: the (time, block id) entries of its history.
  std::vector<std::vector<std::pair<Word, Word>>> histories;
  /// Split times of the underlying list.
  std::vector<Word> split_times;
};

class Catalog {
 public:
  /// child_lo must be strictly increasing; child i covers [child_lo[i], child_hi[i]].
  /// aux, if given, runs parallel to points and is returned with each hit.
  static CatalogBuildInfo build(Session& session, const std::vector<Point>& points, const std::vector<Word>& child_lo,
                                const std::vector<Word>& child_hi, const std::vector<Word>& aux = {});
  /// x1 must be some child_lo and x2 some child_hi.
  static std::vector<Point> query(Session& session, BlockId root, Word x1, Word x2, Word y);
  /// Children [first, last] by index.
  static std::vector<Point> query_children(Session& session, BlockId root, std::size_t first, std::size_t last,
                                           Word y);
  static std::vector<P1Record> query_children_records(Session& session, BlockId root, std::size_t first,
                                                      std::size_t last, Word y);
};

}  // namespace emrr
