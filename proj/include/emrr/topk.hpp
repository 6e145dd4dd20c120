#pragma once

// Top-k colored prefix reporting with k fixed at build time, answered with
// scatter I/O.
//
// Every node p of the compacted trie over S (leaves are strings) has a cover
// S_p: the highest members of S'_k below or at p. Nodes are decided deepest
// first; strings always join S'_k, and an inner node joins when gathering its
// answer from its cover would be too costly (see MembershipRule). Members
// store c_k(p), the k largest colors under p, ascending. Each node stores a
// gather plan: for each cover member with a non-zero contribution, the word
// address of the contributing suffix of its list and its length.
//
// A query finds the node for p through the string index, reads its plan with
// ordinary I/Os, then fetches every planned slot with scatter reads of B
// addresses each.
//
// Storage:
//   lists:  c_k lists back to back, ascending
//   plans:  per node [entries, (list word offset, count) ...]
//   lookup: packed predecessor keyed lo * (n + 1) + hi -> plan offset
//   header: [k, n, string index, lookup, plans, lists, rule]

#include <optional>
#include <string_view>
#include <vector>

#include "emrr/dataset.hpp"
#include "emrr/emsim.hpp"

namespace emrr {

enum class MembershipRule : std::uint8_t {
  /// Join when the planned gather (with duplicates) exceeds 2 |c_k(p)|.
  /// Bounds every query's gathered slots by 2k.
  gather_cost = 0,
  /// Join when sum |c_k(x)| over the cover exceeds 2 |union of c_k(x)|.
  literal = 1,
};

struct TopkBuildInfo {
  BlockId root{};
  std::size_t nodes = 0;
  std::size_t members = 0;       // |S'_k|
  std::size_t list_words = 0;    // sum of |c_k(p)| over S'_k
  std::size_t string_words = 0;  // sum of |c_k(x)| over S
  std::size_t plan_entries = 0;
  std::size_t max_plan_entries = 0;
};

struct TopkTrace {
  std::size_t lo = 0;  // node interval, 1-based ranks
  std::size_t hi = 0;
  std::size_t plan_entries = 0;
  std::size_t gathered_slots = 0;
  std::uint64_t scatter_ios = 0;
};

/// In-memory view of the construction, for audits.
struct TopkNode {
  std::size_t lo = 0;  // 1-based rank interval
  std::size_t hi = 0;
  std::size_t depth = 0;
  bool is_string = false;
  bool member = false;
  std::vector<Word> ck;                                // ascending
  std::vector<std::size_t> cover;                      // node indices of S_p
  std::vector<std::pair<std::size_t, std::size_t>> plan;  // (node, count), count > 0
  std::vector<std::size_t> children;
};

/// Nodes in postorder (children first); the root is last.
std::vector<TopkNode> plan_topk(const Corpus& corpus, std::size_t k, MembershipRule rule = MembershipRule::gather_cost);

class TopkIndex {
 public:
  static TopkBuildInfo build(Session& session, const Corpus& corpus, std::size_t k,
                             MembershipRule rule = MembershipRule::gather_cost);
  /// The k' largest colors under p, ascending, with k' = min(k_query, k);
  /// k_query = 0 means the build k.
  static std::vector<Word> query(Session& session, BlockId root, std::string_view p, std::size_t k_query = 0,
                                 TopkTrace* trace = nullptr);
};

}  // namespace emrr
