#include "emrr/polybase.hpp"

#include <cmath>

#include "emrr/catalog.hpp"
#include "emrr/checks.hpp"
#include "emrr/persist1d.hpp"

namespace emrr {

namespace {

constexpr std::size_t kRecordHeader = 3;
constexpr std::size_t kPolyHeader = 6;

struct NodeView {
  ExtentReader rd;
  Word off;
  bool leaf;
  std::size_t count;
  Word splitters;
  Word ns;

  NodeView(Session& s, BlockId base, Word offset) : rd(s, base, 2), off(offset) {
    const auto h = rd.range(off, kRecordHeader);
    leaf = h[0] & 1;
    count = static_cast<std::size_t>(h[0] >> 1);
    splitters = h[1];
    ns = h[2];
  }
  Point point(std::size_t i) {
    const auto w = rd.range(off + kRecordHeader + kPointWords * i, kPointWords);
    return {w[0], w[1], w[2], w[3]};
  }
  Word child(std::size_t c) { return rd.at(off + kRecordHeader + kPointWords * count + c); }
};

struct Query {
  Session& session;
  BlockId base;
  std::size_t f;
  std::size_t block_points;
  PolyBackend backend;
  Word x1, x2, y;
  std::vector<Point>& out;
  PolyTrace* trace;

  /// Reports own points from index `from` that satisfy the query; true when
  /// every scanned point has y within range.
  bool scan(NodeView& v, std::size_t from, bool filter_x) {
    for (std::size_t i = from; i < v.count; ++i) {
      const Point p = v.point(i);
      if (p.y > y) return false;
      if (!filter_x || (p.x >= x1 && p.x <= x2)) out.push_back(p);
    }
    return true;
  }

  std::vector<P1Record> node_query(Word ns, std::size_t first, std::size_t last) {
    if (backend == PolyBackend::catalog) return Catalog::query_children_records(session, block_id(ns), first, last, y);
    ExtentReader wrap(session, block_id(ns), 1);
    const auto w = wrap.range(0, 3);
    const Word lo = ExtentReader(session, block_id(w[1]), 1).at(first);
    const Word hi = ExtentReader(session, block_id(w[2]), 1).at(last);
    return MicroBase::query_records(session, block_id(w[0]), lo, hi, y);
  }

  void children(NodeView& v, std::size_t first, std::size_t last) {
    if (first > last) return;
    const auto hits = node_query(v.ns, first, last);
    std::vector<std::size_t> per_child(f, 0);
    std::vector<bool> marked(f, false);
    for (const auto& r : hits) {
      out.push_back(to_point(r));
      ++per_child[r.aux >> 1];
      if (r.aux & 1) marked[r.aux >> 1] = true;
    }
    for (std::size_t c = first; c <= last; ++c)
      EMRR_CHECK(marked_iff, per_child[c] < block_points || marked[c]);
    for (const auto& r : hits)
      if (r.aux & 1) enter(v.child(r.aux >> 1), per_child[r.aux >> 1]);
  }

  void enter(Word off, std::size_t reported) {
    NodeView v(session, base, off);
    const std::size_t head = std::min(v.count, block_points);
    if (trace) trace->visits.push_back({off, head, reported});
    EMRR_CHECK(recursion_guard, reported == head);
    if (v.leaf) {
      scan(v, head, false);
      return;
    }
    children(v, 0, f - 1);
  }

  std::size_t locate(NodeView& v, Word x) { return locate_child(session, block_id(v.splitters), x); }

  void path(Word off, bool left, bool right) {
    while (true) {
      NodeView v(session, base, off);
      if (trace) trace->path_nodes.push_back(off);
      const bool full = scan(v, 0, true);
      if (v.leaf || !full) return;
      if (left && right) {
        const std::size_t c1 = locate(v, x1), c2 = locate(v, x2);
        if (c1 == c2) {
          off = v.child(c1);
          continue;
        }
        if (c1 + 1 < c2) children(v, c1 + 1, c2 - 1);
        const Word a = v.child(c1), b = v.child(c2);
        path(a, true, false);
        path(b, false, true);
        return;
      }
      if (left) {
        const std::size_t c = locate(v, x1);
        if (c + 1 < f) children(v, c + 1, f - 1);
        off = v.child(c);
      } else {
        const std::size_t c = locate(v, x2);
        if (c > 0) children(v, 0, c - 1);
        off = v.child(c);
      }
    }
  }
};

void append_record(std::vector<Word>& words, const PstNode& node, Word splitters, Word ns,
                   const std::vector<Word>& child_offsets) {
  words.push_back((Word{node.points.size()} << 1) | (node.leaf ? 1 : 0));
  words.push_back(splitters);
  words.push_back(ns);
  for (const auto& p : node.points) append_point(words, p);
  words.insert(words.end(), child_offsets.begin(), child_offsets.end());
}

}  // namespace

PolyBackend choose_backend(const SimConfig& cfg, std::uint64_t n_total) {
  const double lg = std::log2(static_cast<double>(std::max<std::uint64_t>(n_total, 2)));
  const auto need = static_cast<std::uint64_t>(std::ceil(std::pow(lg, 1.0 / 16.0) - 1e-12));
  return cfg.block_words >= need ? PolyBackend::catalog : PolyBackend::micro;
}

PolyInfo PolyBase::build(Session& session, TabRegistry& registry, const std::vector<Point>& points,
                         const PolyConfig& config) {
  const auto& cfg = session.config();
  const std::size_t B = cfg.block_words;
  PolyInfo info;
  info.backend = config.backend != PolyBackend::automatic
                     ? config.backend
                     : choose_backend(cfg, config.n_total ? config.n_total : points.size());
  if (info.backend == PolyBackend::catalog) {
    info.fanout = config.fanout ? config.fanout : std::max<std::size_t>(2, B);
    info.leaf_param = config.leaf_param ? config.leaf_param : std::max<std::size_t>(1, B / info.fanout);
  } else {
    const auto root16 = static_cast<std::size_t>(std::pow(static_cast<double>(cfg.block_bits()), 1.0 / 16.0) + 1e-9);
    info.fanout = config.fanout ? config.fanout : std::max<std::size_t>(2, root16);
    info.leaf_param = config.leaf_param ? config.leaf_param : B;
  }
  const PstTree tree = build_layout(points, {info.fanout, info.leaf_param, B}, 0, cfg.max_word());
  if (tree.height > config.height_max) throw Error(Errc::capacity, "poly capacity exceeded: tree too tall");
  info.height = tree.height;
  info.nodes = tree.nodes.size();

  // Children precede parents so their offsets are known.
  std::vector<Word> words;
  std::vector<Word> offset(tree.nodes.size(), 0);
  const std::size_t f = info.fanout;
  for (std::size_t v = tree.nodes.size(); v-- > 0;) {
    const PstNode& node = tree.nodes[v];
    Word splitters = 0, ns = 0;
    std::vector<Word> child_offsets;
    if (!node.leaf) {
      splitters = to_word(write_splitters(session, node));
      std::vector<Point> heads;
      std::vector<Word> aux, los, his;
      for (std::size_t c = 0; c < f; ++c) {
        const PstNode& ch = tree.node(tree.child(v, c));
        const std::size_t h = ch.head_count(B);
        for (std::size_t i = 0; i < h; ++i) {
          heads.push_back(ch.points[i]);
          aux.push_back(c * 2 + (i + 1 == h ? 1 : 0));
        }
        los.push_back(ch.lo);
        his.push_back(ch.hi);
        child_offsets.push_back(offset[tree.child(v, c)]);
      }
      if (info.backend == PolyBackend::catalog) {
        ns = to_word(Catalog::build(session, heads, los, his, aux).root);
      } else {
        const BlockId micro = MicroBase::build(session, registry, heads, f * B, aux);
        std::vector<Word> wrap{to_word(micro), to_word(write_extent(session, los)),
                               to_word(write_extent(session, his))};
        ns = to_word(write_extent(session, wrap));
      }
      ++info.node_structures;
    }
    offset[v] = words.size();
    append_record(words, node, splitters, ns, child_offsets);
  }
  const BlockId base = write_extent(session, words);
  std::vector<Word> header{to_word(base), offset[0], points.size(), f, static_cast<Word>(info.backend), tree.height};
  info.root = write_extent(session, header);
  return info;
}

std::vector<Point> PolyBase::query(Session& session, BlockId root, Word x1, Word x2, Word y, PolyTrace* trace) {
  std::vector<Point> out;
  if (x1 > x2) return out;
  ExtentReader hdr(session, root, 1);
  const auto h = hdr.range(0, kPolyHeader);
  Query q{session, block_id(h[0]), static_cast<std::size_t>(h[3]), session.block_words(),
          static_cast<PolyBackend>(h[4]), x1, x2, y, out, trace};
  q.path(h[1], true, true);
  return out;
}

}  // namespace emrr
