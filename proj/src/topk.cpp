#include "emrr/topk.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "emrr/bits.hpp"
#include "emrr/checks.hpp"
#include "emrr/packedpred.hpp"
#include "emrr/strindex.hpp"

namespace emrr {

namespace {

constexpr std::size_t kHeaderWords = 7;

/// The k largest of the union, ascending.
std::vector<Word> top_k(std::vector<Word> all, std::size_t k) {
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() > k) all.erase(all.begin(), all.end() - static_cast<std::ptrdiff_t>(k));
  return all;
}

std::size_t common_prefix(std::string_view a, std::string_view b) {
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return static_cast<std::size_t>(ia - a.begin());
}

struct Planner {
  const std::vector<const CorpusEntry*>& s;
  std::size_t k;
  MembershipRule rule;
  std::vector<TopkNode> nodes;

  std::size_t node(std::size_t lo, std::size_t hi, std::size_t depth) {
    TopkNode v;
    v.lo = lo + 1;
    v.hi = hi + 1;
    v.depth = depth;
    std::vector<Word> pool;
    if (lo == hi) {
      v.is_string = true;
      pool = s[lo]->colors;
    } else {
      // Same grouping as the string index; a string ending here is no child.
      for (std::size_t i = lo; i <= hi;) {
        const std::string& t = s[i]->text;
        if (t.size() == depth) {
          v.is_string = true;
          pool.insert(pool.end(), s[i]->colors.begin(), s[i]->colors.end());
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j + 1 <= hi && s[j + 1]->text.size() > depth && s[j + 1]->text[depth] == t[depth]) ++j;
        const std::size_t d = i == j ? t.size() : common_prefix(t, s[j]->text);
        v.children.push_back(node(i, j, d));
        i = j + 1;
      }
    }
    for (std::size_t c : v.children) pool.insert(pool.end(), nodes[c].ck.begin(), nodes[c].ck.end());
    v.ck = top_k(std::move(pool), k);

    if (!v.is_string) {
      for (std::size_t c : v.children) {
        if (nodes[c].member)
          v.cover.push_back(c);
        else
          v.cover.insert(v.cover.end(), nodes[c].cover.begin(), nodes[c].cover.end());
      }
      // Lists are ascending and the answer is their largest elements, so each
      // member contributes a suffix: everything at or above the answer's minimum.
      const Word floor = v.ck.empty() ? 0 : v.ck.front();
      std::size_t gathered = 0, listed = 0;
      std::set<Word> distinct;
      for (std::size_t x : v.cover) {
        const auto& l = nodes[x].ck;
        const auto count = static_cast<std::size_t>(l.end() - std::lower_bound(l.begin(), l.end(), floor));
        if (count > 0) v.plan.emplace_back(x, count);
        gathered += count;
        listed += l.size();
        distinct.insert(l.begin(), l.end());
      }
      v.member = rule == MembershipRule::gather_cost ? gathered > 2 * v.ck.size() : listed > 2 * distinct.size();
    } else {
      v.member = true;
    }
    const std::size_t self = nodes.size();
    if (v.member) {
      v.cover = {self};
      v.plan.clear();
      if (!v.ck.empty()) v.plan.emplace_back(self, v.ck.size());
    }
    nodes.push_back(std::move(v));
    return self;
  }
};

}  // namespace

std::vector<TopkNode> plan_topk(const Corpus& corpus, std::size_t k, MembershipRule rule) {
  if (k == 0) throw Error(Errc::invalid_argument, "k must be positive");
  validate_corpus(corpus);
  std::vector<const CorpusEntry*> sorted;
  for (const auto& e : corpus) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->text < b->text; });
  Planner p{sorted, k, rule, {}};
  if (!sorted.empty()) {
    const std::size_t last = sorted.size() - 1;
    p.node(0, last, last == 0 ? sorted[0]->text.size() : common_prefix(sorted.front()->text, sorted.back()->text));
  }
  return std::move(p.nodes);
}

TopkBuildInfo TopkIndex::build(Session& session, const Corpus& corpus, std::size_t k, MembershipRule rule) {
  const auto nodes = plan_topk(corpus, k, rule);
  for (const auto& e : corpus)
    for (Word c : e.colors)
      if (c > session.config().max_word()) throw Error(Errc::word_overflow, "color exceeds word size");
  TopkBuildInfo info;
  info.nodes = nodes.size();

  std::vector<Word> lists, list_at(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& v = nodes[i];
    if (v.is_string) info.string_words += v.ck.size();
    if (!v.member) continue;
    ++info.members;
    info.list_words += v.ck.size();
    list_at[i] = lists.size();
    lists.insert(lists.end(), v.ck.begin(), v.ck.end());
  }
  EMRR_CHECK(space_inequality, info.list_words <= 2 * info.string_words);

  const Word span = corpus.size() + 1;
  std::vector<std::pair<Word, Word>> lookup;
  std::vector<Word> plans;
  for (const auto& v : nodes) {
    lookup.emplace_back(v.lo * span + v.hi, plans.size());
    plans.push_back(v.plan.size());
    for (const auto& [x, count] : v.plan) plans.insert(plans.end(), {list_at[x] + nodes[x].ck.size() - count, count});
    info.plan_entries += v.plan.size();
    info.max_plan_entries = std::max(info.max_plan_entries, v.plan.size());
  }
  std::sort(lookup.begin(), lookup.end());
  std::vector<Word> keys, offs;
  for (const auto& [key, off] : lookup) keys.push_back(key), offs.push_back(off);

  std::vector<std::string> strings;
  for (const auto& e : corpus) strings.push_back(e.text);
  const BlockId index = StringIndex::build(session, std::move(strings));
  Word lookup_root = 0;
  if (!keys.empty())
    lookup_root = to_word(PackedPredecessor::build(session, keys, offs, bits_for(keys.back()),
                                                   std::max(1u, bits_for(plans.size())))
                              .root());
  const std::vector<Word> header{k,
                                 corpus.size(),
                                 to_word(index),
                                 lookup_root,
                                 to_word(write_extent(session, plans)),
                                 to_word(write_extent(session, lists)),
                                 static_cast<Word>(rule)};
  info.root = write_extent(session, header);
  return info;
}

std::vector<Word> TopkIndex::query(Session& session, BlockId root, std::string_view p, std::size_t k_query,
                                  TopkTrace* trace) {
  const auto h = ExtentReader(session, root, 1).range(0, kHeaderWords);
  const std::size_t k = static_cast<std::size_t>(h[0]);
  const Word n = h[1];
  if (n == 0) return {};
  const auto iv = StringIndex::rank_interval(session, block_id(h[2]), p);
  if (!iv) return {};
  const auto hit = PackedPredecessor::predecessor(session, block_id(h[3]), iv->lo * (n + 1) + iv->hi);
  if (!hit || hit->key != iv->lo * (n + 1) + iv->hi) throw Error(Errc::format, "top-k node lookup failed");

  ExtentReader plans(session, block_id(h[4]), 2);
  const std::size_t entries = static_cast<std::size_t>(plans.at(hit->payload));
  const auto plan = plans.range(hit->payload + 1, 2 * entries);

  const std::uint32_t B = session.block_words();
  const BlockId lists = block_id(h[5]);
  std::vector<WordAddress> addr;
  for (std::size_t e = 0; e < entries; ++e)
    for (Word w = plan[2 * e]; w < plan[2 * e] + plan[2 * e + 1]; ++w)
      addr.push_back({lists + w / B, static_cast<std::uint32_t>(w % B)});
  const std::uint64_t before = session.stats().scatter_ios;
  std::vector<Word> gathered;
  for (std::size_t i = 0; i < addr.size(); i += B) {
    const auto chunk = session.scatter_read(std::span(addr).subspan(i, std::min<std::size_t>(B, addr.size() - i)));
    gathered.insert(gathered.end(), chunk.begin(), chunk.end());
  }
  auto out = top_k(gathered, k);
  if (static_cast<MembershipRule>(h[6]) == MembershipRule::gather_cost)
    EMRR_CHECK(gather_bound, gathered.size() <= 2 * out.size());
  if (trace) {
    trace->lo = iv->lo;
    trace->hi = iv->hi;
    trace->plan_entries = entries;
    trace->gathered_slots = gathered.size();
    trace->scatter_ios = session.stats().scatter_ios - before;
  }
  const std::size_t want = k_query == 0 ? k : std::min(k_query, k);
  if (out.size() > want) out.erase(out.begin(), out.end() - static_cast<std::ptrdiff_t>(want));
  return out;
}

}  // namespace emrr
