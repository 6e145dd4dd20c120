#include "emrr/threesided.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "emrr/checks.hpp"
#include "emrr/microbase.hpp"

namespace emrr {

namespace {

constexpr std::size_t kManifestWords = 8;

NodeIndex sibling(NodeIndex v) { return v % 2 == 1 ? v + 1 : v - 1; }

bool is_ancestor_or_self(NodeIndex a, NodeIndex v) {
  while (v > a) v = (v - 1) / 2;
  return v == a;
}

struct Manifest {
  std::size_t n;
  Word max_x;
  unsigned height;
  std::size_t leaf_param;
  BlockId leaf_array;
  BlockId node_points;
  BlockId leaf_records;
};

struct TopQuery {
  Session& session;
  const Manifest& m;
  Word x1, x2, y;
  std::size_t B;
  std::vector<Point>& out;
  TopTrace* trace;
  ExtentReader records;

  NodeIndex first_leaf() const { return (NodeIndex{1} << m.height) - 1; }

  Word record(NodeIndex leaf, std::size_t slot) {
    return records.at((leaf - first_leaf()) * (m.height + 1) + slot);
  }

  void report(Point p) {
    p.tag = 0;
    out.push_back(p);
  }

  void base(NodeIndex leaf) {
    if (trace) ++trace->base_queries;
    for (const auto& p : PolyBase::query(session, block_id(record(leaf, 0)), x1, x2, y)) report(p);
  }

  std::vector<Point> path(NodeIndex leaf, unsigned depth) {
    if (trace) ++trace->path_queries;
    return PolyBase::query(session, block_id(record(leaf, 1 + depth)), x1, x2, y);
  }

  /// z lies strictly between the two paths and all B of its points were reported.
  void descend(NodeIndex z, std::size_t reported) {
    EMRR_CHECK(recursion_guard, reported == B);
    if (trace) trace->visits.push_back({z, B, reported});
    if (depth_of(2, z) + 1 == m.height) {
      base(2 * z + 1);
      base(2 * z + 2);
      return;
    }
    for (NodeIndex c : {2 * z + 1, 2 * z + 2}) {
      ExtentReader pts(session, m.node_points, 1);
      const auto w = pts.range(c * kPointWords * B, kPointWords * B);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < B; ++i) {
        const Point p{w[kPointWords * i], w[kPointWords * i + 1], w[kPointWords * i + 2], 0};
        if (p.y > y) break;
        if (p.x >= x1 && p.x <= x2) {
          report(p);
          ++hits;
        }
      }
      if (hits == B) descend(c, hits);
    }
  }
};

}  // namespace

std::size_t default_leaf_param(const SimConfig& cfg, std::size_t n) {
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  return cfg.block_words * static_cast<std::size_t>(std::ceil(lg * lg - 1e-9));
}

TopInfo ThreeSided::build(Session& session, const std::vector<Point>& points, const TopConfig& config) {
  const auto& cfg = session.config();
  const std::size_t B = cfg.block_words;
  TopInfo info;
  info.n = points.size();
  info.leaf_param = config.leaf_param ? config.leaf_param : default_leaf_param(cfg, points.size());
  Word max_x = 0;
  for (const auto& p : points) max_x = std::max(max_x, p.x);
  if (max_x / 4 > std::max<std::size_t>(points.size(), B))
    throw Error(Errc::not_rank_space, "x-coordinates are not in rank space");

  if (points.empty()) {
    const std::vector<Word> manifest{0, 0, 0, info.leaf_param, 0, 0, 0, static_cast<Word>(config.backend)};
    info.root = write_extent(session, manifest);
    return info;
  }

  const PstTree tree = build_layout(points, {2, info.leaf_param, B}, 0, max_x);
  info.height = tree.height;
  const auto leaves = tree.leaves();
  info.leaves = leaves.size();
  PolyConfig pc;
  pc.backend = config.backend;
  pc.n_total = points.size();
  TabRegistry registry;

  // Leaf array: leaves are in x order and their intervals tile [0, max_x].
  std::vector<Word> array(max_x + 1);
  for (NodeIndex v : leaves) {
    const PstNode& leaf = tree.node(v);
    for (Word x = leaf.lo; x <= std::min(leaf.hi, max_x); ++x) array[x] = v;
  }

  std::vector<Word> node_points;
  for (const PstNode& node : tree.nodes) {
    if (node.leaf) continue;
    if (node.points.size() != B) throw Error(Errc::invalid_argument, "internal node without B points");
    node_points.resize((node.id + 1) * kPointWords * B);
    std::vector<Word> w;
    for (const auto& p : node.points) append_point(w, p);
    std::copy(w.begin(), w.end(), node_points.begin() + static_cast<std::ptrdiff_t>(node.id * kPointWords * B));
  }

  auto tagged = [&](NodeIndex z, std::vector<Point>& dst) {
    const PstNode& node = tree.node(z);
    for (std::size_t i = 0; i < node.points.size(); ++i) {
      Point p = node.points[i];
      p.tag = z * 2 + (i + 1 == node.points.size() ? 1 : 0);
      dst.push_back(p);
    }
  };

  std::vector<Word> records;
  for (NodeIndex v : leaves) {
    records.push_back(to_word(PolyBase::build(session, registry, tree.node(v).points, pc).root));
    std::vector<NodeIndex> up;  // parent(v) .. root
    for (NodeIndex z = v; z != 0;) {
      z = tree.parent(z);
      up.push_back(z);
    }
    for (unsigned a = 0; a < tree.height; ++a) {
      std::vector<Point> pts;
      for (unsigned d = a; d < tree.height; ++d) {
        const NodeIndex z = up[tree.height - 1 - d];
        tagged(z, pts);
        if (z != 0) tagged(sibling(z), pts);
      }
      info.path_points += pts.size();
      ++info.path_structures;
      records.push_back(to_word(PolyBase::build(session, registry, pts, pc).root));
    }
  }

  const BlockId array_root = write_extent(session, array);
  const BlockId points_root = write_extent(session, node_points);
  const BlockId records_root = write_extent(session, records);
  std::vector<Word> manifest{points.size(),         max_x, tree.height, info.leaf_param, to_word(array_root),
                             to_word(points_root), to_word(records_root), static_cast<Word>(config.backend)};
  info.root = write_extent(session, manifest);
  return info;
}

std::vector<Point> ThreeSided::query(Session& session, BlockId root, Word x1, Word x2, Word y, TopTrace* trace) {
  std::vector<Point> out;
  const auto h = ExtentReader(session, root, 1).range(0, kManifestWords);
  const Manifest m{static_cast<std::size_t>(h[0]), h[1], static_cast<unsigned>(h[2]), static_cast<std::size_t>(h[3]),
                   block_id(h[4]), block_id(h[5]), block_id(h[6])};
  if (m.n == 0 || x1 > x2 || x1 > m.max_x) return out;
  x2 = std::min(x2, m.max_x);
  TopQuery q{session, m, x1, x2, y, session.block_words(), out, trace, ExtentReader(session, m.leaf_records, 2)};
  if (m.height == 0) {
    q.base(0);
    return out;
  }

  ExtentReader array(session, m.leaf_array, 2);
  const NodeIndex u1 = array.at(x1), u2 = array.at(x2);
  const NodeIndex l = lca(2, u1, u2);
  if (trace) trace->u1 = u1, trace->u2 = u2, trace->lca = l;

  std::set<NodeIndex> leaves{u1, u2};
  if (u1 != u2) leaves.insert({sibling(u1), sibling(u2)});
  for (NodeIndex v : leaves) q.base(v);

  std::vector<Point> hits = q.path(u1, 0);
  const unsigned dl = depth_of(2, l);
  if (u1 != u2 && dl + 2 < m.height) {
    const auto more = q.path(u2, dl + 2);
    hits.insert(hits.end(), more.begin(), more.end());
  }

  // Group by origin node; nodes off both paths lie between them in x.
  std::map<NodeIndex, std::pair<std::size_t, bool>> per_node;
  for (const auto& p : hits) {
    auto& [count, marked] = per_node[p.tag >> 1];
    ++count;
    marked = marked || (p.tag & 1);
    q.report(p);
  }
  for (const auto& [z, e] : per_node) {
    if (is_ancestor_or_self(z, u1) || is_ancestor_or_self(z, u2)) continue;
    EMRR_CHECK(marked_iff, e.second == (e.first == q.B));
    if (e.second) q.descend(z, e.first);
  }
  return out;
}

}  // namespace emrr
