#pragma once

// Three-sided reporting on a handful of points.
//
// The points are swept by increasing y into a persistent block list (time i =
// i-th point in (y, x) order). A query (x1, x2, y) becomes the version
// t = #{y' <= y}; the block to start from is the one that held pred(x1) at
// time t. That block id depends only on the point set in rank space, so it is
// tabulated once per distinct shape and shared by all structures of that shape.
//
// Header block: [m, directory, x ranks root, time map root, table root].
// Table: (m+1)^2 words, entry r*(m+1) + t = start block for
// r = #{x <= x1} at time t.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "emrr/emsim.hpp"
#include "emrr/persist1d.hpp"
#include "emrr/point.hpp"

namespace emrr {

/// Lehmer code of the y-rank permutation (points taken in x order) as a
/// little-endian multi-word integer. Equal iff the sets are rank-identical.
std::vector<Word> shape_code(const std::vector<Point>& points);

/// Start-block tables keyed by (m, shape code); tables live in the store.
class TabRegistry {
 public:
  /// Existing table for the shape, or nullopt.
  std::optional<BlockId> find(std::size_t m, const std::vector<Word>& code) const;
  void add(std::size_t m, const std::vector<Word>& code, BlockId table);
  std::size_t size() const { return tables_.size(); }
  std::uint64_t materialized() const { return materialized_; }

 private:
  std::map<std::pair<std::size_t, std::vector<Word>>, BlockId> tables_;
  std::uint64_t materialized_ = 0;
};

/// Default cap: max(4, floor(b^(1/8))).
std::size_t micro_capacity(const SimConfig& cfg);

class MicroBase {
 public:
  /// Writes the structure; returns its header block.
  /// aux, if given, runs parallel to points and is returned with each hit.
  static BlockId build(Session& session, TabRegistry& registry, const std::vector<Point>& points,
                       std::size_t capacity = 0, const std::vector<Word>& aux = {});
  static std::vector<Point> query(Session& session, BlockId root, Word x1, Word x2, Word y);
  static std::vector<P1Record> query_records(Session& session, BlockId root, Word x1, Word x2, Word y);
};

}  // namespace emrr
