#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "emrr/catalog.hpp"
#include "emrr/microbase.hpp"
#include "emrr/oracle.hpp"
#include "emrr/persist1d.hpp"
#include "emrr/rng.hpp"

using namespace emrr;

namespace {

struct Children {
  std::vector<Word> lo, hi;
};

// f children over [0, f*width); up to `per_child` points in each.
std::pair<std::vector<Point>, Children> random_node(SplitMix64& rng, std::size_t f, std::size_t per_child,
                                                    Word width, Word y_range) {
  Children ch;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < f; ++i) {
    ch.lo.push_back(i * width);
    ch.hi.push_back(i * width + width - 1);
    std::vector<Word> xs(width);
    std::iota(xs.begin(), xs.end(), i * width);
    std::shuffle(xs.begin(), xs.end(), rng);
    const std::size_t k = rng.uniform(0, per_child);
    for (std::size_t j = 0; j < k; ++j) pts.push_back({xs[j], rng.uniform(0, y_range), pts.size(), i});
  }
  return {pts, ch};
}

Word history_at(const std::vector<std::pair<Word, Word>>& h, Word t) {
  Word id = 0;
  for (const auto& [time, v] : h)
    if (time <= t) id = v;
  return id;
}

}  // namespace

TEST_CASE("no splits: every history has one entry") {
  BlockStore store({8, 32});
  Session s(store);
  std::vector<Point> pts{{1, 5, 0, 0}, {12, 2, 0, 0}, {25, 9, 0, 0}};
  auto info = Catalog::build(s, pts, {0, 10, 20}, {9, 19, 29});
  CHECK(info.split_times.empty());
  for (const auto& h : info.histories) CHECK(h.size() == 1);
  CHECK(normalized(Catalog::query(s, info.root, 0, 29, 100)) == normalized(pts));
  CHECK(Catalog::query(s, info.root, 0, 29, 0).empty());
  CHECK(normalized(Catalog::query(s, info.root, 10, 29, 5)) == normalized({{12, 2, 0, 0}}));
}

TEST_CASE("misaligned and invalid inputs") {
  BlockStore store({8, 32});
  Session s(store);
  auto info = Catalog::build(s, {{1, 5, 0, 0}}, {0, 10}, {9, 19});
  try {
    Catalog::query(s, info.root, 1, 19, 10);
    FAIL("expected misaligned");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::misaligned);
    CHECK(std::string(e.what()) == "catalog requires aligned range");
  }
  CHECK_THROWS_AS(Catalog::query(s, info.root, 0, 18, 10), Error);
  CHECK_THROWS_AS(Catalog::build(s, {}, {10, 0}, {19, 9}), Error);
  CHECK_THROWS_AS(Catalog::build(s, {{50, 1, 0, 0}}, {0, 10}, {9, 19}), Error);
}

TEST_CASE("histories change only at splits and match a replay") {
  SplitMix64 rng(21);
  for (std::uint32_t B : {4u, 8u}) {
    for (int inst = 0; inst < 30; ++inst) {
      const std::size_t f = rng.uniform(2, 8);
      auto [pts, ch] = random_node(rng, f, B, 3 * B, inst % 3 ? 1000 : 4);
      BlockStore store({B, 32});
      Session s(store);
      auto info = Catalog::build(s, pts, ch.lo, ch.hi);

      BlockStore scratch({B, 32});
      Session ss(scratch);
      Persist1D replay(ss, P1Layout::compact(32, 1 << 16), 1 << 16);
      const auto sweep = sweep_order(pts);
      for (std::size_t t = 0; t <= sweep.size(); ++t) {
        if (t > 0) replay.insert(sweep[t - 1].x);
        for (std::size_t i = 0; i < f; ++i) REQUIRE(history_at(info.histories[i], t) == replay.start_block(ch.lo[i]));
      }
      for (const auto& h : info.histories) {
        REQUIRE(h.size() <= info.split_times.size() + 1);
        for (std::size_t e = 1; e < h.size(); ++e)
          REQUIRE(std::find(info.split_times.begin(), info.split_times.end(), h[e].first) != info.split_times.end());
      }
    }
  }
}

TEST_CASE("aligned queries match the oracle; reads and space bounded") {
  // Space per catalog is a few persistent lists of f*B points plus f histories.
  constexpr double kSpaceC = 60.0;
  SplitMix64 rng(5);
  for (std::uint32_t B : {4u, 8u, 16u}) {
    for (int inst = 0; inst < 25; ++inst) {
      const std::size_t f = rng.uniform(2, 16);
      auto [pts, ch] = random_node(rng, f, B, 2 * B, inst % 2 ? 8 : 10000);
      BlockStore store({B, 32});
      Session s(store);
      auto info = Catalog::build(s, pts, ch.lo, ch.hi);
      CHECK(static_cast<double>(store.block_count()) <= kSpaceC * 2.0 * f);
      for (int q = 0; q < 300; ++q) {
        std::size_t a = rng.uniform(0, f - 1), b = rng.uniform(0, f - 1);
        if (a > b) std::swap(a, b);
        const Word y = rng.uniform(0, inst % 2 ? 9 : 10001);
        Session qs(store);
        const auto got = Catalog::query(qs, info.root, ch.lo[a], ch.hi[b], y);
        REQUIRE(normalized(got) == normalized(oracle::brute_threesided(pts, {ch.lo[a], ch.hi[b], y})));
        const double k = static_cast<double>(got.size());
        REQUIRE(static_cast<double>(qs.stats().reads) <= 60.0 + 40.0 * 2.0 * k / B);
        Session qc(store);
        REQUIRE(normalized(Catalog::query_children(qc, info.root, a, b, y)) == normalized(got));
      }
    }
  }
}

TEST_CASE("agrees with the micro structure on shared inputs") {
  SplitMix64 rng(77);
  BlockStore store({8, 32});
  TabRegistry reg;
  for (int inst = 0; inst < 60; ++inst) {
    const std::size_t f = rng.uniform(2, 4);
    auto [pts, ch] = random_node(rng, f, 4, 6, 20);
    if (pts.size() > 12) pts.resize(12);
    Session s(store);
    auto info = Catalog::build(s, pts, ch.lo, ch.hi);
    const BlockId micro = MicroBase::build(s, reg, pts, 12);
    for (std::size_t a = 0; a < f; ++a)
      for (std::size_t b = a; b < f; ++b)
        for (Word y = 0; y <= 21; ++y)
          REQUIRE(normalized(Catalog::query(s, info.root, ch.lo[a], ch.hi[b], y)) ==
                  normalized(MicroBase::query(s, micro, ch.lo[a], ch.hi[b], y)));
  }
}
