#include "emrr/pstlayout.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "emrr/bits.hpp"
#include "emrr/packedpred.hpp"

namespace emrr {

void PstParams::validate() const {
  if (fanout < 2) throw Error(Errc::invalid_argument, "fanout must be >= 2");
  if (leaf_param < 1) throw Error(Errc::invalid_argument, "leaf parameter must be >= 1");
  if (block_points < 1) throw Error(Errc::invalid_argument, "block_points must be >= 1");
}

namespace {

struct Builder {
  PstTree& tree;
  unsigned height;

  void build(NodeIndex id, unsigned depth, std::vector<Point> pts, Word lo, Word hi) {
    PstNode& slot = tree.nodes[id];
    slot.id = id;
    slot.depth = depth;
    slot.lo = lo;
    slot.hi = hi;
    slot.subtree_size = pts.size();
    const auto& prm = tree.params;
    if (depth == height) {
      slot.leaf = true;
      std::sort(pts.begin(), pts.end(), by_y_then_x);
      slot.points = std::move(pts);
      return;
    }
    // pts is x-sorted; pick the B lowest by (y, x).
    std::vector<Point> by_y = pts;
    std::nth_element(by_y.begin(), by_y.begin() + static_cast<std::ptrdiff_t>(prm.block_points) - 1, by_y.end(),
                     by_y_then_x);
    by_y.resize(prm.block_points);
    std::sort(by_y.begin(), by_y.end(), by_y_then_x);
    std::set<Word> taken;
    for (const auto& p : by_y) taken.insert(p.x);
    std::vector<Point> rest;
    rest.reserve(pts.size() - by_y.size());
    for (const auto& p : pts)
      if (!taken.count(p.x)) rest.push_back(p);
    slot.points = std::move(by_y);

    const std::size_t f = prm.fanout;
    const std::size_t q = rest.size() / f, r = rest.size() % f;
    std::vector<std::vector<Point>> groups(f);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < f; ++i) {
      const std::size_t len = q + (i < r ? 1 : 0);
      groups[i].assign(rest.begin() + static_cast<std::ptrdiff_t>(pos), rest.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
    std::vector<Word> starts(f);
    for (std::size_t i = 0; i < f; ++i) starts[i] = i == 0 ? lo : groups[i].front().x;
    tree.nodes[id].splitters.assign(starts.begin() + 1, starts.end());
    for (std::size_t i = 0; i < f; ++i) {
      const Word child_hi = i + 1 < f ? starts[i + 1] - 1 : hi;
      build(tree.child(id, i), depth + 1, std::move(groups[i]), starts[i], child_hi);
    }
  }
};

}  // namespace

std::vector<NodeIndex> PstTree::leaves() const {
  std::vector<NodeIndex> out;
  for (const auto& nd : nodes)
    if (nd.leaf) out.push_back(nd.id);
  return out;
}

std::size_t PstTree::child_for(NodeIndex v, Word x) const {
  const auto& sp = nodes.at(v).splitters;
  return static_cast<std::size_t>(std::upper_bound(sp.begin(), sp.end(), x) - sp.begin());
}

PstTree build_layout(std::vector<Point> points, const PstParams& params, Word lo, Word hi) {
  params.validate();
  std::sort(points.begin(), points.end(), by_x);
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].x == points[i - 1].x) throw Error(Errc::not_rank_space, "not rank space: duplicate x");
  if (!points.empty() && (points.front().x < lo || points.back().x > hi))
    throw Error(Errc::invalid_argument, "point outside root interval");

  PstTree tree;
  tree.params = params;
  tree.n = points.size();
  // Largest subtree size per depth; all subtrees at a depth are within one of it.
  std::size_t s = points.size();
  unsigned height = 0;
  while (s > params.leaf_max()) {
    s = (s - params.block_points + params.fanout - 1) / params.fanout;
    ++height;
  }
  tree.height = height;
  std::size_t count = 0, level = 1;
  for (unsigned d = 0; d <= height; ++d, level *= params.fanout) count += level;
  tree.nodes.resize(count);
  Builder{tree, height}.build(0, 0, std::move(points), lo, hi);
  return tree;
}

unsigned depth_of(std::size_t fanout, NodeIndex v) {
  unsigned d = 0;
  while (v != 0) {
    v = (v - 1) / fanout;
    ++d;
  }
  return d;
}

NodeIndex lca(std::size_t fanout, NodeIndex a, NodeIndex b) {
  unsigned da = depth_of(fanout, a), db = depth_of(fanout, b);
  while (da > db) a = (a - 1) / fanout, --da;
  while (db > da) b = (b - 1) / fanout, --db;
  while (a != b) a = (a - 1) / fanout, b = (b - 1) / fanout;
  return a;
}

std::size_t locate_child(Session& session, BlockId splitter_root, Word x) {
  auto hit = PackedPredecessor::predecessor(session, splitter_root, x);
  return hit ? static_cast<std::size_t>(hit->payload) : 0;
}

BlockId write_splitters(Session& session, const PstNode& node) {
  std::vector<Word> idx(node.splitters.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
  const unsigned key_bits = session.config().word_bits;
  return PackedPredecessor::build(session, node.splitters, idx, key_bits, bits_for(idx.size())).root();
}

std::vector<std::string> audit_layout(const PstTree& tree, const std::vector<Point>& input) {
  std::vector<std::string> bad;
  const auto& prm = tree.params;
  auto fail = [&](const std::string& what, NodeIndex v) { bad.push_back(what + " at node " + std::to_string(v)); };

  std::vector<Point> seen;
  for (const auto& nd : tree.nodes) {
    seen.insert(seen.end(), nd.points.begin(), nd.points.end());
    if (!std::is_sorted(nd.points.begin(), nd.points.end(), by_y_then_x)) fail("points not y-sorted", nd.id);
    for (const auto& p : nd.points)
      if (p.x < nd.lo || p.x > nd.hi) fail("point outside x-interval", nd.id);
    if (nd.leaf) {
      if (nd.depth != tree.height) fail("leaf above bottom level", nd.id);
      if (nd.points.size() > prm.leaf_max()) fail("leaf too large", nd.id);
      if (tree.height > 0 && nd.points.size() < prm.leaf_param) fail("leaf too small", nd.id);
      continue;
    }
    if (nd.points.size() != prm.block_points) fail("internal node without B points", nd.id);
    const Point max_own = nd.points.empty() ? Point{} : nd.points.back();
    std::size_t lo_size = ~std::size_t{0}, hi_size = 0;
    for (std::size_t i = 0; i < prm.fanout; ++i) {
      const auto& ch = tree.node(tree.child(nd.id, i));
      lo_size = std::min(lo_size, ch.subtree_size);
      hi_size = std::max(hi_size, ch.subtree_size);
      if (ch.lo != (i == 0 ? nd.lo : nd.splitters[i - 1])) fail("child interval mismatch", ch.id);
      if (i + 1 < prm.fanout && ch.hi + 1 != nd.splitters[i]) fail("child intervals not contiguous", ch.id);
      // Per-edge heap order implies it against every descendant.
      for (const auto& p : ch.points)
        if (by_y_then_x(p, max_own)) fail("heap order", ch.id);
    }
    if (hi_size - lo_size > 1) fail("unequal split", nd.id);
  }
  auto a = normalized(seen), b = normalized(input);
  if (a != b) bad.push_back("points not partitioned");

  const double nl = static_cast<double>(tree.n) / static_cast<double>(prm.leaf_param);
  if (static_cast<double>(tree.nodes.size()) > 2.0 * nl + 1.0) bad.push_back("too many nodes");
  const double hb = nl > 1 ? std::ceil(std::log(nl) / std::log(static_cast<double>(prm.fanout))) + 1 : 1;
  if (tree.height > hb) bad.push_back("tree too tall");
  return bad;
}

}  // namespace emrr
