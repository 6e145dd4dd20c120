#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "emrr/oracle.hpp"
#include "emrr/polybase.hpp"
#include "emrr/rng.hpp"

using namespace emrr;

namespace {

std::vector<Point> random_points(SplitMix64& rng, std::size_t n, Word y_range) {
  std::vector<Word> xs(n);
  std::iota(xs.begin(), xs.end(), Word{0});
  for (auto& x : xs) x = x * 2 + 1;
  std::shuffle(xs.begin(), xs.end(), rng);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({xs[i], rng.uniform(0, y_range), i, 7});
  return pts;
}

Query3 random_query(SplitMix64& rng, std::size_t n, Word y_range) {
  Word a = rng.uniform(0, 2 * n + 2), b = rng.uniform(0, 2 * n + 2);
  if (a > b) std::swap(a, b);
  return {a, b, rng.uniform(0, y_range + 1)};
}

// Reads per query: header, two root-to-leaf paths of node records and
// splitter searches, node-structure queries along them, plus output.
constexpr double kC0 = 100.0;
constexpr double kC1 = 40.0;

}  // namespace

TEST_CASE("small input is a single leaf with no node structures") {
  BlockStore store({8, 32});
  Session s(store);
  TabRegistry reg;
  SplitMix64 rng(1);
  auto pts = random_points(rng, 16, 100);
  auto info = PolyBase::build(s, reg, pts);
  CHECK(info.backend == PolyBackend::catalog);
  CHECK(info.nodes == 1);
  CHECK(info.node_structures == 0);
  CHECK(normalized(PolyBase::query(s, info.root, 0, 1000, 1000)) == normalized(pts));
}

TEST_CASE("backend rule") {
  CHECK(choose_backend({8, 32}, 1u << 20) == PolyBackend::catalog);
  CHECK(choose_backend({2, 32}, 1u << 20) == PolyBackend::catalog);
  // lg^(1/16) n exceeds 2 only for astronomically large n, so tiny B is the only micro case.
  CHECK(choose_backend({2, 64}, ~std::uint64_t{0}) == PolyBackend::catalog);
}

TEST_CASE("random queries match the oracle on both backends") {
  SplitMix64 rng(2025);
  int total = 0;
  for (auto backend : {PolyBackend::catalog, PolyBackend::micro}) {
    for (std::uint32_t B : {4u, 8u}) {
      for (std::size_t n : {std::size_t{B}, std::size_t{64}, std::size_t{500}, std::size_t{4096}}) {
        if (backend == PolyBackend::micro && n > 1000) continue;
        BlockStore store({B, 32});
        Session s(store);
        TabRegistry reg;
        const Word yr = n % 2 ? 30 : 4 * n;
        auto pts = random_points(rng, n, yr);
        PolyConfig cfg;
        cfg.backend = backend;
        auto info = PolyBase::build(s, reg, pts, cfg);
        CHECK(info.height <= cfg.height_max);
        const int queries = backend == PolyBackend::catalog ? 1000 : 500;
        for (int i = 0; i < queries; ++i, ++total) {
          const auto q = random_query(rng, n, yr);
          Session qs(store);
          PolyTrace trace;
          const auto got = PolyBase::query(qs, info.root, q.x1, q.x2, q.y, &trace);
          REQUIRE(normalized(got) == normalized(oracle::brute_threesided(pts, q)));
          REQUIRE(static_cast<double>(qs.stats().reads) <= kC0 + kC1 * static_cast<double>(got.size()) / B);
          for (const auto& v : trace.visits) REQUIRE(v.reported == v.head_points);

        }
      }
    }
  }
  CHECK(total >= 10000);

}

TEST_CASE("full and empty queries") {
  SplitMix64 rng(3);
  BlockStore store({8, 32});
  Session s(store);
  TabRegistry reg;
  const std::size_t n = 3000;
  auto pts = random_points(rng, n, 1u << 20);
  for (auto& p : pts) p.y += 10;
  auto info = PolyBase::build(s, reg, pts);
  Session all(store);
  CHECK(normalized(PolyBase::query(all, info.root, 0, ~Word{0} >> 32, ~Word{0} >> 32)) == normalized(pts));
  CHECK(static_cast<double>(all.stats().reads) <= kC0 + kC1 * n / 8.0);
  for (Word y : {0u, 5u, 9u}) {
    Session none(store);
    CHECK(PolyBase::query(none, info.root, 0, 1u << 30, y).empty());
    CHECK(none.stats().reads <= 4);
  }
}

TEST_CASE("space stays linear across doublings") {
  SplitMix64 rng(4);
  std::vector<double> ratios;
  for (std::size_t n = 64; n <= 8192; n *= 2) {
    BlockStore store({8, 32});
    Session s(store);
    TabRegistry reg;
    PolyBase::build(s, reg, random_points(rng, n, n));
    ratios.push_back(static_cast<double>(store.block_count()) / (1.0 + static_cast<double>(n) / 8));
  }
  for (double r : ratios) CHECK(r <= 80.0);
  MESSAGE("blocks per (1 + n/B): " << ratios.front() << " .. " << ratios.back());
}
