#pragma once

// Skeleton of a parametrized external-memory priority search tree: a heap on
// y and a search tree on x with branching parameter f and leaf parameter l.
//
// The B smallest-y points go to the node; the rest are split into f
// consecutive x-groups of equal size (sizes differ by at most one). Because
// sibling subtrees never differ by more than one point, the depth at which
// every subtree drops to at most f*l + B points is the same for all of them,
// and every node at that depth becomes a leaf. The result is a complete f-ary
// tree in which every leaf holds between l and f*l + B points.
//
// Nodes are numbered in heap order (root 0, children of v are f*v+1 .. f*v+f),
// so the number doubles as the root-to-node path and LCA needs no I/O.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emrr/emsim.hpp"
#include "emrr/point.hpp"

namespace emrr {

struct PstParams {
  std::size_t fanout = 2;       // f
  std::size_t leaf_param = 1;   // l
  std::size_t block_points = 8; // B, own points per internal node

  std::size_t leaf_max() const { return fanout * leaf_param + block_points; }
  void validate() const;
};

using NodeIndex = std::uint64_t;

struct PstNode {
  NodeIndex id = 0;
  unsigned depth = 0;
  bool leaf = false;
  /// Internal: the node's own points. Leaf: all of its points. Sorted by (y, x).
  std::vector<Point> points;
  /// Internal: smallest x of children 1..f-1.
  std::vector<Word> splitters;
  Word lo = 0;  // x-interval covered by the subtree, inclusive
  Word hi = 0;
  std::size_t subtree_size = 0;

  /// The B smallest-y points of the subtree (own points for internal nodes).
  std::size_t head_count(std::size_t block_points) const { return std::min(points.size(), block_points); }
  /// Point with the largest y among the head points.
  std::optional<Point> marked(std::size_t block_points) const {
    if (points.empty()) return std::nullopt;
    return points[head_count(block_points) - 1];
  }
};

struct PstTree {
  PstParams params;
  std::size_t n = 0;
  unsigned height = 0;  // depth of every leaf
  std::vector<PstNode> nodes;  // indexed by heap number

  const PstNode& root() const { return nodes.front(); }
  const PstNode& node(NodeIndex v) const { return nodes.at(v); }
  NodeIndex child(NodeIndex v, std::size_t i) const { return params.fanout * v + 1 + i; }
  NodeIndex parent(NodeIndex v) const { return (v - 1) / params.fanout; }
  std::size_t child_slot(NodeIndex v) const { return (v - 1) % params.fanout; }
  std::vector<NodeIndex> leaves() const;

  /// In-memory child selection: the child whose x-interval contains x.
  std::size_t child_for(NodeIndex v, Word x) const;
};

/// Builds the layout. x-coordinates must be pairwise distinct. The root covers
/// [lo, hi], which must contain every x.
PstTree build_layout(std::vector<Point> points, const PstParams& params, Word lo = 0, Word hi = ~Word{0});

/// Deepest common ancestor, from heap numbers alone.
NodeIndex lca(std::size_t fanout, NodeIndex a, NodeIndex b);
inline NodeIndex lca(const PstTree& t, NodeIndex a, NodeIndex b) { return lca(t.params.fanout, a, b); }
unsigned depth_of(std::size_t fanout, NodeIndex v);

/// Child index for x using a stored splitter structure (keys = splitters,
/// payload = child index). Below all splitters -> 0.
std::size_t locate_child(Session& session, BlockId splitter_root, Word x);

/// Writes a node's splitters as a packed predecessor structure.
BlockId write_splitters(Session& session, const PstNode& node);

/// Full-traversal audit: heap order, search order, partition, leaf window,
/// node-count and height bounds, equal-split balance. Empty when all hold.
std::vector<std::string> audit_layout(const PstTree& tree, const std::vector<Point>& input);

}  // namespace emrr
