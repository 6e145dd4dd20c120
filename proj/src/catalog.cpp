#include "emrr/catalog.hpp"

#include <algorithm>

#include "emrr/bits.hpp"
#include "emrr/checks.hpp"
#include "emrr/packedpred.hpp"
#include "emrr/persist1d.hpp"

namespace emrr {

namespace {

constexpr std::size_t kHeaderWords = 8;

// The time map's payloads pack the list time for y with the list head at that
// time; the head is where queries starting at child 0 begin.
unsigned head_bits(Word n) { return bits_for(1 + 2 * n); }

std::vector<P1Record> run_query(Session& session, const std::vector<Word>& h, std::size_t first, std::size_t last,
                                Word y) {
  std::vector<P1Record> out;
  if (h[0] == 0 || first > last) return out;
  const auto hit = PackedPredecessor::predecessor(session, block_id(h[3]), y);
  if (!hit) return out;
  const unsigned ib = head_bits(h[0]);
  const Word t = hit->payload >> ib;
  // Every point lies inside the children, so outer bounds need no filter.
  const Word x1 = first == 0 ? 0 : ExtentReader(session, block_id(h[5]), 1).at(first);
  const Word x2 = last + 1 == h[1] ? ~Word{0} : ExtentReader(session, block_id(h[6]), 1).at(last);
  // Every boundary has an entry at time 0, so the hit stays inside its own key range.
  const Word start = first == 0 ? hit->payload & ((Word{1} << ib) - 1)
                                : PackedPredecessor::predecessor(session, block_id(h[7]), first * (h[0] + 1) + t)->payload;
  return Persist1D::query(session, block_id(h[2]), x1, x2, t, start);
}

std::vector<Word> read_header(Session& session, BlockId root) {
  ExtentReader rd(session, root, 1);
  return rd.range(0, kHeaderWords);
}

}  // namespace

CatalogBuildInfo Catalog::build(Session& session, const std::vector<Point>& points, const std::vector<Word>& child_lo,
                                const std::vector<Word>& child_hi, const std::vector<Word>& aux) {
  const std::size_t f = child_lo.size();
  if (f == 0 || child_hi.size() != f) throw Error(Errc::invalid_argument, "catalog needs matching child bounds");
  for (std::size_t i = 0; i < f; ++i) {
    if (child_hi[i] < child_lo[i]) throw Error(Errc::invalid_argument, "catalog child interval reversed");
    if (i > 0 && child_lo[i] <= child_hi[i - 1]) throw Error(Errc::invalid_argument, "catalog boundaries not sorted");
  }
  if (!aux.empty() && aux.size() != points.size()) throw Error(Errc::invalid_argument, "aux length mismatch");
  const auto order = sweep_permutation(points);
  std::vector<Point> sweep;
  for (auto i : order) sweep.push_back(points[i]);

  CatalogBuildInfo info;
  info.histories.resize(f);
  const Word max_aux = aux.empty() ? 0 : *std::max_element(aux.begin(), aux.end());
  Persist1D list(session, P1Layout::fitted(points, std::max<Word>(1, sweep.size()), max_aux),
                 std::max<Word>(1, sweep.size()));
  auto record = [&](std::size_t t) {
    for (std::size_t i = 0; i < f; ++i) {
      const Word id = list.start_block(child_lo[i]);
      auto& hs = info.histories[i];
      if (hs.empty() || hs.back().second != id) hs.emplace_back(t, id);
    }
  };
  record(0);
  std::uint64_t splits = 0;
  for (std::size_t t = 1; t <= sweep.size(); ++t) {
    const auto& p = sweep[t - 1];
    if (p.x < child_lo.front() || p.x > child_hi.back()) throw Error(Errc::invalid_argument, "point outside children");
    list.insert(p.x, p.y, p.payload, p.tag, aux.empty() ? 0 : aux[order[t - 1]]);
    if (list.splits() != splits) {
      splits = list.splits();
      info.split_times.push_back(t);
    }
    record(t);
  }
  const BlockId dir = list.finalize();
  const unsigned w = session.config().word_bits;
  const std::uint64_t max_id = list.id_count();

  std::vector<Word> keys, ids;
  for (std::size_t i = 0; i < f; ++i)
    for (const auto& [t, id] : info.histories[i]) keys.push_back(i * (sweep.size() + 1) + t), ids.push_back(id);
  const BlockId hist = PackedPredecessor::build(session, keys, ids, bits_for(keys.back()), bits_for(max_id)).root();
  std::vector<Word> idx(f);
  for (std::size_t i = 0; i < f; ++i) idx[i] = i;
  const BlockId lo_root = PackedPredecessor::build(session, child_lo, idx, w, bits_for(f)).root();
  const BlockId los = write_extent(session, child_lo);
  const BlockId his = write_extent(session, child_hi);
  std::vector<Word> ys, packed;
  const unsigned ib = head_bits(sweep.size());
  if (ib + bits_for(sweep.size()) > 64) throw Error(Errc::capacity, "catalog too large for its time map");
  const auto& heads = info.histories[0];
  std::size_t hi_entry = 0;
  for (std::size_t t = 1; t <= sweep.size(); ++t) {
    if (t < sweep.size() && sweep[t].y == sweep[t - 1].y) continue;
    while (hi_entry + 1 < heads.size() && heads[hi_entry + 1].first <= t) ++hi_entry;
    const Word head = heads[hi_entry].second;
    ys.push_back(sweep[t - 1].y);
    packed.push_back((Word{t} << ib) | head);
  }
  const BlockId tmap =
      ys.empty() ? BlockId{} : PackedPredecessor::build(session, ys, packed, w, ib + bits_for(sweep.size())).root();
  std::vector<Word> header{sweep.size(), f,           to_word(dir), to_word(tmap),
                           to_word(lo_root),    to_word(los), to_word(his), to_word(hist)};
  info.root = write_extent(session, header);
  return info;
}

std::vector<Point> Catalog::query(Session& session, BlockId root, Word x1, Word x2, Word y) {
  const auto h = read_header(session, root);
  auto a = PackedPredecessor::predecessor(session, block_id(h[4]), x1);
  auto b = PackedPredecessor::predecessor(session, block_id(h[4]), x2);
  ExtentReader his(session, block_id(h[6]), 1);
  if (!a || a->key != x1 || !b || his.at(b->payload) != x2)
    throw Error(Errc::misaligned, "catalog requires aligned range");
  std::vector<Point> out;
  for (const auto& r : run_query(session, h, a->payload, b->payload, y)) out.push_back(to_point(r));
  return out;
}

std::vector<Point> Catalog::query_children(Session& session, BlockId root, std::size_t first, std::size_t last,
                                           Word y) {
  std::vector<Point> out;
  for (const auto& r : query_children_records(session, root, first, last, y)) out.push_back(to_point(r));
  return out;
}

std::vector<P1Record> Catalog::query_children_records(Session& session, BlockId root, std::size_t first,
                                                      std::size_t last, Word y) {
  const auto h = read_header(session, root);
  EMRR_CHECK(catalog_alignment, first <= last && last < h[1]);
  if (last >= h[1]) throw Error(Errc::invalid_argument, "child index out of range");
  return run_query(session, h, first, last, y);
}

}  // namespace emrr
