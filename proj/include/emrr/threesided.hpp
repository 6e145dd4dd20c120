#pragma once

// Linear-space three-sided range reporting in O(1 + k/B) I/Os for points in
// rank space.
//
// Skeleton: a binary priority search tree (f = 2) with leaf parameter
// l = B * ceil(lg^2 n). Every leaf v carries
//   - a base poly structure over its own points, and
//   - for each ancestor w at depth a, a path poly structure over the own
//     points of the nodes on the path w .. parent(v) and of their siblings.
// Path-structure points are tagged node * 2 + marked, where the marked point
// is the largest-y point of the node.
//
// A query finds the leaves u1, u2 holding x1 and x2 through a direct array,
// asks the base structures of u1, u2 and their siblings, then u1's path
// structure from the root and u2's from the grandchild of lca(u1, u2) toward
// u2. Every off-path node between the paths whose marked point came back has
// all B of its points in the answer, which pays for visiting its children:
// internal children are scanned directly, leaf children answer through their
// base structures.
//
// Storage:
//   manifest:    [n, max_x, height, l, leaf array, node points, leaf records, backend]
//   leaf array:  max_x + 1 words, entry x = leaf whose x-interval holds x
//   node points: internal node z at word z * 4B, its B points sorted by (y, x)
//   leaf record: leaf j at word j * (height + 1): [base root, path root per depth]
// Reported points have tag 0.

#include <cstdint>
#include <vector>

#include "emrr/emsim.hpp"
#include "emrr/point.hpp"
#include "emrr/polybase.hpp"
#include "emrr/pstlayout.hpp"

namespace emrr {

struct TopConfig {
  std::size_t leaf_param = 0;  // 0 = B * ceil(lg^2 n)
  PolyBackend backend = PolyBackend::automatic;
};

struct TopInfo {
  BlockId root{};
  std::size_t n = 0;
  unsigned height = 0;
  std::size_t leaf_param = 0;
  std::size_t leaves = 0;
  std::size_t path_structures = 0;
  std::size_t path_points = 0;  // summed over all path structures
};

/// One entry per off-path node whose children were visited.
struct TopVisit {
  NodeIndex node = 0;
  std::size_t head_points = 0;
  std::size_t reported = 0;
};

struct TopTrace {
  NodeIndex u1 = 0;
  NodeIndex u2 = 0;
  NodeIndex lca = 0;
  std::size_t base_queries = 0;
  std::size_t path_queries = 0;
  std::vector<TopVisit> visits;
};

std::size_t default_leaf_param(const SimConfig& cfg, std::size_t n);

class ThreeSided {
 public:
  /// x must be distinct; x-coordinates index a direct array, so max x should
  /// be O(n).
  static TopInfo build(Session& session, const std::vector<Point>& points, const TopConfig& config = {});
  static std::vector<Point> query(Session& session, BlockId root, Word x1, Word x2, Word y,
                                  TopTrace* trace = nullptr);
};

}  // namespace emrr
