#include <cmath>
#include <numeric>

#include "doctest.h"
#include "emrr/pstlayout.hpp"
#include "emrr/rng.hpp"

using namespace emrr;

namespace {

std::vector<Point> random_points(SplitMix64& rng, std::size_t n, Word y_range) {
  std::vector<Word> xs(n);
  std::iota(xs.begin(), xs.end(), Word{0});
  std::shuffle(xs.begin(), xs.end(), rng);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({xs[i], rng.uniform(0, y_range), i, 0});
  return pts;
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& e : v) s += e + "; ";
  return s;
}

NodeIndex walk_up_lca(const PstTree& t, NodeIndex a, NodeIndex b) {
  std::vector<NodeIndex> pa;
  for (NodeIndex v = a;; v = t.parent(v)) {
    pa.push_back(v);
    if (v == 0) break;
  }
  for (NodeIndex v = b;; v = t.parent(v)) {
    if (std::find(pa.begin(), pa.end(), v) != pa.end()) return v;
    if (v == 0) return 0;
  }
}

}  // namespace

TEST_CASE("small input becomes a single leaf") {
  SplitMix64 rng(1);
  PstParams prm{2, 4, 4};
  auto pts = random_points(rng, prm.leaf_max(), 100);
  auto t = build_layout(pts, prm);
  CHECK(t.nodes.size() == 1);
  CHECK(t.root().leaf);
  CHECK(t.root().points.size() == pts.size());
  CHECK(audit_layout(t, pts).empty());
}

TEST_CASE("n = 64, B = 4, f = 2, l = 4 passes the traversal audit") {
  SplitMix64 rng(64);
  auto pts = random_points(rng, 64, 1000);
  auto t = build_layout(pts, {2, 4, 4});
  CHECK(t.height >= 1);
  const auto bad = audit_layout(t, pts);
  CHECK_MESSAGE(bad.empty(), joined(bad));
}

TEST_CASE("duplicate x is rejected") {
  std::vector<Point> pts{{1, 1, 0, 0}, {1, 2, 0, 0}};
  try {
    build_layout(pts, {2, 1, 2});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_rank_space);
    CHECK(std::string(e.what()).find("not rank space") != std::string::npos);
  }
}

TEST_CASE("random builds satisfy every layout invariant") {
  SplitMix64 rng(77);
  const std::vector<PstParams> params{{2, 1, 2}, {2, 4, 4}, {3, 2, 4}, {4, 1, 8}, {8, 8, 8}, {2, 16, 4}};
  for (const auto& prm : params) {
    for (int inst = 0; inst < 100; ++inst) {
      const std::size_t n = rng.uniform(1, 600);
      auto pts = random_points(rng, n, inst % 2 ? 20 : 100000);  // odd instances have many y ties
      auto t = build_layout(pts, prm);
      const auto bad = audit_layout(t, pts);
      REQUIRE_MESSAGE(bad.empty(), joined(bad));
      for (NodeIndex v : t.leaves()) REQUIRE(t.node(v).depth == t.height);
    }
  }
}

TEST_CASE("binary configuration with l = B lg^2 n") {
  SplitMix64 rng(8);
  const std::size_t n = 1 << 14, B = 8;
  const auto lg = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
  PstParams prm{2, B * lg * lg, B};
  auto pts = random_points(rng, n, n);
  auto t = build_layout(pts, prm);
  CHECK(audit_layout(t, pts).empty());
  CHECK(t.height == 3);
}

TEST_CASE("lca matches a walk-up oracle") {
  SplitMix64 rng(5);
  for (std::size_t f : {2u, 3u, 5u}) {
    auto pts = random_points(rng, 2000, 5000);
    auto t = build_layout(pts, {f, 2, 4});
    const auto leaves = t.leaves();
    CHECK(lca(t, 0, leaves.back()) == 0);
    for (int i = 0; i < 500; ++i) {
      const NodeIndex a = rng.uniform(0, t.nodes.size() - 1), b = rng.uniform(0, t.nodes.size() - 1);
      REQUIRE(lca(t, a, a) == a);
      REQUIRE(lca(t, a, b) == walk_up_lca(t, a, b));
    }
  }
}

TEST_CASE("stored splitters locate the child whose interval contains x") {
  SplitMix64 rng(9);
  BlockStore store({8, 32});
  for (std::size_t f : {2u, 4u, 7u}) {
    auto pts = random_points(rng, 3000, 3000);
    auto t = build_layout(pts, {f, 4, 8});
    Session s(store);
    for (NodeIndex v = 0; v < 10 && !t.node(v).leaf; ++v) {
      const auto& nd = t.node(v);
      const BlockId root = write_splitters(s, nd);
      CHECK(locate_child(s, root, nd.lo) == 0);
      CHECK(locate_child(s, root, 0) == 0);
      CHECK(locate_child(s, root, ~Word{0} >> 32) == f - 1);
      for (int i = 0; i < 200; ++i) {
        const Word x = rng.uniform(nd.lo, std::min<Word>(nd.hi, 4000));
        std::size_t want = 0;
        for (std::size_t c = 0; c < f; ++c) {
          const auto& ch = t.node(t.child(v, c));
          if (ch.lo <= x && x <= ch.hi) want = c;
        }
        REQUIRE(locate_child(s, root, x) == want);
        REQUIRE(t.child_for(v, x) == want);
      }
    }
  }
}
