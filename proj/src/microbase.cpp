#include "emrr/microbase.hpp"

#include <algorithm>
#include <cmath>

#include "emrr/bits.hpp"
#include "emrr/packedpred.hpp"
#include "emrr/persist1d.hpp"

namespace emrr {

std::vector<Word> shape_code(const std::vector<Point>& points) {
  std::vector<Point> by_rank = sweep_order(points);
  std::vector<std::size_t> yrank(points.size());
  std::vector<Point> xs = points;
  std::sort(xs.begin(), xs.end(), by_x);
  for (std::size_t i = 0; i < xs.size(); ++i)
    yrank[i] = static_cast<std::size_t>(
        std::lower_bound(by_rank.begin(), by_rank.end(), xs[i], by_y_then_x) - by_rank.begin());

  // Horner over factorial digits: code = code * (m - i) + digit_i.
  std::vector<Word> code{0};
  std::vector<bool> used(points.size(), false);
  const std::size_t m = points.size();
  for (std::size_t i = 0; i < m; ++i) {
    Word digit = 0;
    for (std::size_t r = 0; r < yrank[i]; ++r)
      if (!used[r]) ++digit;
    used[yrank[i]] = true;
    unsigned __int128 carry = digit;
    for (auto& limb : code) {
      const unsigned __int128 v = static_cast<unsigned __int128>(limb) * (m - i) + carry;
      limb = static_cast<Word>(v);
      carry = v >> 64;
    }
    if (carry) code.push_back(static_cast<Word>(carry));
  }
  return code;
}

std::optional<BlockId> TabRegistry::find(std::size_t m, const std::vector<Word>& code) const {
  auto it = tables_.find({m, code});
  if (it == tables_.end()) return std::nullopt;
  return it->second;
}

void TabRegistry::add(std::size_t m, const std::vector<Word>& code, BlockId table) {
  tables_.emplace(std::pair{m, code}, table);
  ++materialized_;
}

std::size_t micro_capacity(const SimConfig& cfg) {
  const auto root = static_cast<std::size_t>(std::pow(static_cast<double>(cfg.block_bits()), 1.0 / 8.0) + 1e-9);
  return std::max<std::size_t>(4, root);
}

BlockId MicroBase::build(Session& session, TabRegistry& registry, const std::vector<Point>& points,
                         std::size_t capacity, const std::vector<Word>& aux) {
  if (capacity == 0) capacity = micro_capacity(session.config());
  const std::size_t m = points.size();
  if (m > capacity) throw Error(Errc::capacity, "micro capacity exceeded");
  std::vector<Point> xs = points;
  std::sort(xs.begin(), xs.end(), by_x);
  for (std::size_t i = 1; i < m; ++i)
    if (xs[i].x == xs[i - 1].x) throw Error(Errc::not_rank_space, "not rank space: duplicate x");

  if (!aux.empty() && aux.size() != m) throw Error(Errc::invalid_argument, "aux length mismatch");
  const auto order = sweep_permutation(points);
  std::vector<Point> sweep;
  for (auto i : order) sweep.push_back(points[i]);
  const auto code = shape_code(points);
  auto table = registry.find(m, code);
  std::vector<Word> entries;
  if (!table) entries.assign((m + 1) * (m + 1), 0);

  const Word max_aux = aux.empty() ? 0 : *std::max_element(aux.begin(), aux.end());
  Persist1D list(session, P1Layout::fitted(points, std::max<Word>(1, sweep.size()), max_aux),
                 std::max<Word>(1, sweep.size()));
  auto record_column = [&](std::size_t t) {
    entries[t] = list.head_block();
    for (std::size_t r = 1; r <= m; ++r) entries[r * (m + 1) + t] = list.start_block(xs[r - 1].x);
  };
  if (!table) record_column(0);
  for (std::size_t t = 1; t <= m; ++t) {
    const auto& p = sweep[t - 1];
    list.insert(p.x, p.y, p.payload, p.tag, aux.empty() ? 0 : aux[order[t - 1]]);
    if (!table) record_column(t);
  }
  const BlockId dir = list.finalize();
  if (!table) {
    table = write_extent(session, entries);
    registry.add(m, code, *table);
  }

  std::vector<Word> keys(m), ranks(m);
  for (std::size_t i = 0; i < m; ++i) keys[i] = xs[i].x, ranks[i] = i + 1;
  const unsigned w = session.config().word_bits;
  const BlockId xrank = PackedPredecessor::build(session, keys, ranks, w, bits_for(m)).root();
  const BlockId tmap = build_time_map(session, sweep);
  std::vector<Word> header{m, to_word(dir), to_word(xrank), to_word(tmap), to_word(*table)};
  return write_extent(session, header);
}

std::vector<Point> MicroBase::query(Session& session, BlockId root, Word x1, Word x2, Word y) {
  std::vector<Point> out;
  for (const auto& r : query_records(session, root, x1, x2, y)) out.push_back(to_point(r));
  return out;
}

std::vector<P1Record> MicroBase::query_records(Session& session, BlockId root, Word x1, Word x2, Word y) {
  std::vector<P1Record> out;
  if (x1 > x2) return out;
  ExtentReader hdr(session, root, 1);
  const std::vector<Word> h = hdr.range(0, 5);
  const Word m = h[0];
  if (m == 0) return out;
  const Word t = time_for(session, block_id(h[3]), y);
  if (t == 0) return out;
  auto hit = PackedPredecessor::predecessor(session, block_id(h[2]), x1);
  const Word r = hit ? hit->payload : 0;
  const std::uint64_t idx = r * (m + 1) + t;
  const std::uint64_t bw = session.block_words();
  const Word start = session.read(block_id(h[4]) + idx / bw)[idx % bw];
  return Persist1D::query(session, block_id(h[1]), x1, x2, t, start);
}

}  // namespace emrr
