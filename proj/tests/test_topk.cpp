#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "emrr/checks.hpp"
#include "emrr/oracle.hpp"
#include "emrr/rng.hpp"
#include "emrr/topk.hpp"

using namespace emrr;

namespace {

Corpus random_corpus(SplitMix64& rng, std::size_t n, std::size_t max_len, unsigned alphabet, Word sigma,
                     std::size_t max_colors) {
  std::map<std::string, std::vector<Word>> uniq;
  while (uniq.size() < n) {
    std::string s(rng.uniform(0, max_len), 'a');
    for (auto& ch : s) ch = static_cast<char>('a' + rng.uniform(0, alphabet - 1));
    std::vector<Word> cs;
    for (std::size_t j = rng.uniform(0, max_colors); j > 0; --j) cs.push_back(rng.uniform(1, sigma));
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    uniq.emplace(s, cs);
  }
  Corpus c;
  for (auto& [t, cs] : uniq) c.push_back({t, cs});
  std::shuffle(c.begin(), c.end(), rng);
  return c;
}

std::vector<Word> iota_colors(Word from, Word to) {
  std::vector<Word> v;
  for (Word c = from; c <= to; ++c) v.push_back(c);
  return v;
}

// Reads after the string search: header, node lookup, plan of at most 2k
// entries of two words.
constexpr double kC0 = 30.0;
constexpr double kC1 = 8.0;

}  // namespace

TEST_CASE("two identical child lists do not merge, three do") {
  const std::size_t L = 5;
  for (auto rule : {MembershipRule::gather_cost, MembershipRule::literal}) {
    const Corpus two{{"a", iota_colors(1, L)}, {"b", iota_colors(1, L)}};
    auto nodes = plan_topk(two, 8, rule);
    CHECK_FALSE(nodes.back().member);
    CHECK(nodes.back().cover.size() == 2);
    const Corpus three{{"a", iota_colors(1, L)}, {"b", iota_colors(1, L)}, {"c", iota_colors(1, L)}};
    nodes = plan_topk(three, 8, rule);
    CHECK(nodes.back().member);
    CHECK(nodes.back().ck == iota_colors(1, L));
  }
}

TEST_CASE("single string is the only member") {
  const auto nodes = plan_topk({{"solo", {3, 7, 9}}}, 2);
  REQUIRE(nodes.size() == 1);
  CHECK(nodes[0].member);
  CHECK(nodes[0].is_string);
  CHECK(nodes[0].ck == std::vector<Word>{7, 9});
  BlockStore store({4, 32});
  Session s(store);
  const auto info = TopkIndex::build(s, {{"solo", {3, 7, 9}}}, 2);
  for (std::string_view p : {"", "s", "sol", "solo"}) CHECK(TopkIndex::query(s, info.root, p) == std::vector<Word>{7, 9});
  CHECK(TopkIndex::query(s, info.root, "solos").empty());
  CHECK(TopkIndex::query(s, info.root, "x").empty());
}

TEST_CASE("k = 0 is an error") {
  BlockStore store({4, 32});
  Session s(store);
  CHECK_THROWS_AS(TopkIndex::build(s, {{"a", {1}}}, 0), Error);
}

TEST_CASE("literal membership can gather more than 2k slots") {
  // k = 2: three copies of {9, 10} plus two disjoint lists. Listed 10 <= 2 * 6
  // distinct, so the literal rule keeps the cover, yet the answer {9, 10} needs
  // all six copies.
  const Corpus corpus{{"a", {9, 10}}, {"b", {9, 10}}, {"c", {9, 10}}, {"d", {1, 2}}, {"e", {3, 4}}};
  BlockStore store({4, 32});
  Session s(store);
  const auto literal = TopkIndex::build(s, corpus, 2, MembershipRule::literal);
  TopkTrace tr;
  CHECK(TopkIndex::query(s, literal.root, "", 0, &tr) == std::vector<Word>{9, 10});
  CHECK(tr.gathered_slots == 6);
  CHECK(tr.gathered_slots > 2 * 2);

  const auto gather = TopkIndex::build(s, corpus, 2, MembershipRule::gather_cost);
  CHECK(TopkIndex::query(s, gather.root, "", 0, &tr) == std::vector<Word>{9, 10});
  CHECK(tr.gathered_slots == 2);
  CHECK(gather.members == literal.members + 1);
}

TEST_CASE("covers tile their node and plans gather suffixes") {
  SplitMix64 rng(31);
  for (int inst = 0; inst < 200; ++inst) {
    const auto corpus = random_corpus(rng, rng.uniform(1, 12), 4, 3, 12, 4);
    const std::size_t k = rng.uniform(1, 5);
    for (auto rule : {MembershipRule::gather_cost, MembershipRule::literal}) {
      const auto nodes = plan_topk(corpus, k, rule);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& v = nodes[i];
        // Members' intervals partition [lo, hi], so dropping any leaves its strings uncovered.
        std::vector<std::pair<std::size_t, std::size_t>> spans;
        for (std::size_t x : v.cover) {
          REQUIRE(nodes[x].member);
          spans.emplace_back(nodes[x].lo, nodes[x].hi);
        }
        std::sort(spans.begin(), spans.end());
        REQUIRE(!spans.empty());
        REQUIRE(spans.front().first == v.lo);
        REQUIRE(spans.back().second == v.hi);
        for (std::size_t j = 1; j < spans.size(); ++j) REQUIRE(spans[j].first == spans[j - 1].second + 1);
        // Plan counts: at least the answer, at most twice it under the gather-cost rule.
        std::size_t sum = 0;
        std::vector<Word> got;
        for (const auto& [x, count] : v.plan) {
          REQUIRE(count > 0);
          REQUIRE(count <= nodes[x].ck.size());
          sum += count;
          got.insert(got.end(), nodes[x].ck.end() - static_cast<std::ptrdiff_t>(count), nodes[x].ck.end());
        }
        std::sort(got.begin(), got.end());
        got.erase(std::unique(got.begin(), got.end()), got.end());
        REQUIRE(got == v.ck);
        REQUIRE(sum >= v.ck.size());
        if (rule == MembershipRule::gather_cost) REQUIRE(sum <= 2 * v.ck.size());
      }
    }
  }
}

TEST_CASE("random top-k queries match the oracle within the gather and scatter bounds") {
  checks::reset();
  SplitMix64 rng(4711);
  int total = 0;
  for (std::uint32_t B : {4u, 8u, 16u}) {
    for (int inst = 0; inst < 8; ++inst) {
      const auto corpus = random_corpus(rng, rng.uniform(1, 500), 8, inst % 2 ? 3 : 26, rng.uniform(4, 400), 12);
      const std::size_t k = rng.uniform(1, 16);
      BlockStore store({B, 32});
      Session s(store);
      const auto info = TopkIndex::build(s, corpus, k);
      REQUIRE(info.list_words <= 2 * info.string_words);
      REQUIRE(info.max_plan_entries <= 2 * k);
      for (int qn = 0; qn < 450; ++qn, ++total) {
        const auto& base = corpus[rng.uniform(0, corpus.size() - 1)].text;
        std::string p = base.substr(0, rng.uniform(0, base.size()));
        if (qn % 5 == 0) p.push_back(static_cast<char>('a' + rng.uniform(0, 25)));
        Session q(store);
        TopkTrace tr;
        const auto got = TopkIndex::query(q, info.root, p, 0, &tr);
        REQUIRE(got == oracle::brute_topk(corpus, p, k));
        if (got.size() == k) REQUIRE(tr.gathered_slots <= 2 * k);
        REQUIRE(tr.scatter_ios <= 1 + (2 * k + B - 1) / B);
        const std::size_t kq = rng.uniform(1, k);
        REQUIRE(TopkIndex::query(q, info.root, p, kq) == oracle::brute_topk(corpus, p, kq));
      }
    }
  }
  CHECK(total >= 10000);
  CHECK(checks::fired_total() == 0);
}

TEST_CASE("ordinary reads are the string search plus O(1 + k/B)") {
  SplitMix64 rng(8);
  for (std::uint32_t B : {4u, 8u}) {
    const auto corpus = random_corpus(rng, 400, 8, 4, 300, 10);
    for (std::size_t k : {1u, 4u, 16u, 64u}) {
      BlockStore store({B, 32});
      Session s(store);
      const auto info = TopkIndex::build(s, corpus, k);
      for (int qn = 0; qn < 200; ++qn) {
        const auto& base = corpus[rng.uniform(0, corpus.size() - 1)].text;
        const std::string p = base.substr(0, rng.uniform(0, base.size()));
        Session q(store);
        TopkIndex::query(q, info.root, p);
        const double total_reads = static_cast<double>(q.stats().reads);
        REQUIRE(total_reads <= kC0 + kC1 * (1.0 + static_cast<double>(k) / B) + 8.0 * (1.0 + p.size() / 4.0 / B +
                                                                                         std::log(400.0) / std::log(B)));
      }
    }
  }
}
