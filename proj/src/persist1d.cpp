#include "emrr/persist1d.hpp"

#include <algorithm>
#include <array>

#include "emrr/bits.hpp"
#include "emrr/packedpred.hpp"

namespace emrr {

namespace {

constexpr std::size_t kHeaderWords = 6;

Word low_mask(unsigned bits) { return bits >= 64 ? ~Word{0} : (Word{1} << bits) - 1; }

std::array<unsigned, 6> widths(const P1Layout& l) {
  return {l.x_bits, l.time_bits, l.y_bits, l.payload_bits, l.tag_bits, l.aux_bits};
}

std::array<Word, 6> fields(const P1Record& r) { return {r.x, r.time, r.y, r.payload, r.tag, r.aux}; }

Word pack3(unsigned a, unsigned b, unsigned c) { return (Word{a} << 14) | (Word{b} << 7) | c; }

std::size_t extent_blocks_for(const P1Layout& l, const SimConfig& cfg) {
  const std::uint64_t bits = bits_for(cfg.block_words - 1) + (cfg.block_words - 1) * std::uint64_t{l.record_bits()};
  return static_cast<std::size_t>((bits + cfg.block_bits() - 1) / cfg.block_bits());
}

// Successor history kept inside a block's own extent, in the bits after its
// B-1 record slots: [entry count, (time, id)...]. A count of capacity + 1 marks
// a block whose history lives in the shared structure instead. capacity < 0
// means the spare bits cannot even hold the count.
struct InlineHistory {
  std::uint64_t offset = 0;
  unsigned count_bits = 0;
  unsigned time_bits = 0;
  unsigned id_bits = 0;
  int capacity = -1;

  unsigned entry_bits() const { return time_bits + id_bits; }
};

InlineHistory inline_history(const P1Layout& l, const SimConfig& cfg, Word max_time) {
  InlineHistory h;
  h.offset = bits_for(cfg.block_words - 1) + (cfg.block_words - 1) * std::uint64_t{l.record_bits()};
  const std::uint64_t spare = extent_blocks_for(l, cfg) * cfg.block_bits() - h.offset;
  h.time_bits = l.time_bits;
  // Each split adds two ids and needs at least one insert.
  h.id_bits = bits_for(1 + 2 * max_time);
  for (int cap = 0;; ++cap) {
    const unsigned cb = bits_for(static_cast<std::uint64_t>(cap) + 1);
    if (cb + static_cast<std::uint64_t>(cap) * h.entry_bits() > spare) break;
    h.capacity = cap;
    h.count_bits = cb;
  }
  return h;
}

bool overflows(const InlineHistory& ih, std::size_t entries) {
  return ih.capacity < 0 || entries > static_cast<std::size_t>(ih.capacity);
}

struct Header {
  BlockId base{};
  std::uint64_t ids = 0;
  BlockId history{};
  Word max_time = 0;
  P1Layout layout;
};

Header read_header(Session& session, BlockId root) {
  ExtentReader rd(session, root, 1);
  const auto h = rd.range(0, kHeaderWords);
  Header out;
  out.base = block_id(h[0]);
  out.ids = h[1];
  out.history = block_id(h[2]);
  out.max_time = h[3];
  auto un = [](Word v, unsigned i) { return static_cast<unsigned>((v >> (14 - 7 * i)) & 0x7f); };
  out.layout = {un(h[4], 0), un(h[4], 1), un(h[4], 2), un(h[5], 0), un(h[5], 1), un(h[5], 2)};
  return out;
}

// Splits create ids in pairs (even a, odd b), so a starts out pointing at
// a + 1 and the head starts at block 1; neither needs a history entry.
Word implicit_successor(std::uint64_t id) { return id == 0 || id % 2 == 0 ? id + 1 : 0; }

Word shared_successor_at(Session& session, const Header& h, std::uint64_t id, Word t) {
  auto hit = PackedPredecessor::predecessor(session, h.history, id * (h.max_time + 1) + t);
  if (hit && hit->key / (h.max_time + 1) == id) return hit->payload;
  return implicit_successor(id);
}

/// Successor of block `id` at time t, given the words of its extent.
Word successor_at(Session& session, const Header& h, const InlineHistory& ih, std::uint64_t id, Word t,
                  std::span<const Word> words) {
  if (ih.capacity < 0) return shared_successor_at(session, h, id, t);
  const unsigned wb = session.config().word_bits;
  const std::uint64_t count = get_bits(words, wb, ih.offset, ih.count_bits);
  if (count > static_cast<std::uint64_t>(ih.capacity)) return shared_successor_at(session, h, id, t);
  Word succ = implicit_successor(id);
  std::uint64_t pos = ih.offset + ih.count_bits;
  for (std::uint64_t i = 0; i < count; ++i, pos += ih.entry_bits()) {
    if (get_bits(words, wb, pos, ih.time_bits) > t) break;
    succ = get_bits(words, wb, pos + ih.time_bits, ih.id_bits);
  }
  return succ;
}

}  // namespace

P1Layout P1Layout::compact(unsigned x_bits, Word max_time) { return {x_bits, bits_for(max_time), 0, 0, 0, 0}; }

P1Layout P1Layout::full(const SimConfig& cfg, Word max_time, Word max_aux) {
  const unsigned w = cfg.word_bits;
  return {w, bits_for(max_time), w, w, w, max_aux == 0 ? 0 : bits_for(max_aux)};
}

P1Layout P1Layout::fitted(const std::vector<Point>& points, Word max_time, Word max_aux) {
  Word x = 0, y = 0, payload = 0, tag = 0;
  for (const auto& p : points) {
    x = std::max(x, p.x);
    y = std::max(y, p.y);
    payload = std::max(payload, p.payload);
    tag = std::max(tag, p.tag);
  }
  return {bits_for(x), bits_for(max_time), bits_for(y), bits_for(payload), bits_for(tag),
          bits_for(max_aux)};
}

Persist1D::Persist1D(Session& session, const P1Layout& layout, Word max_time)
    : session_(session), layout_(layout), max_time_(max_time),
      extent_blocks_(extent_blocks_for(layout, session.config())) {
  for (unsigned wbits : widths(layout))
    if (wbits > 64) throw Error(Errc::invalid_argument, "field width out of range");
  if (layout.x_bits == 0 || layout.time_bits == 0 || max_time > low_mask(layout.time_bits))
    throw Error(Errc::invalid_argument, "layout cannot hold coordinates and times");
  blocks_.emplace_back();
  live_.push_back(create_block({}));
}

std::uint64_t Persist1D::create_block(std::vector<P1Record> records) {
  const BlockId at = session_.store().allocate_extent(extent_blocks_);
  if (blocks_.size() == 1) base_ = at;
  if (at != base_ + (blocks_.size() - 1) * extent_blocks_)
    throw Error(Errc::invalid_argument, "allocation interleaved with a persistent list build");
  LBlock blk;
  blk.records = std::move(records);
  blocks_.push_back(std::move(blk));
  write_block(blocks_.size() - 1);
  return blocks_.size() - 1;
}

void Persist1D::write_block(std::uint64_t id) {
  const auto& cfg = session_.config();
  BitWriter bw(cfg.word_bits);
  bw.put(blocks_[id].records.size(), bits_for(cfg.block_words - 1));
  const auto ws = widths(layout_);
  for (const auto& r : blocks_[id].records) {
    const auto fs = fields(r);
    for (std::size_t f = 0; f < ws.size(); ++f)
      if (ws[f] > 0) bw.put(fs[f], ws[f]);
  }
  const auto ih = inline_history(layout_, cfg, max_time_);
  if (ih.capacity >= 0) {
    for (std::uint64_t gap = ih.offset - bw.bit_size(); gap > 0;) {
      const unsigned step = static_cast<unsigned>(std::min<std::uint64_t>(gap, 32));
      bw.put(0, step);
      gap -= step;
    }
    const auto& hist = blocks_[id].history;
    if (overflows(ih, hist.size())) {
      bw.put(static_cast<Word>(ih.capacity) + 1, ih.count_bits);
    } else {
      bw.put(hist.size(), ih.count_bits);
      for (const auto& [t, succ] : hist) {
        bw.put(t, ih.time_bits);
        bw.put(succ, ih.id_bits);
      }
    }
  }
  std::vector<Word> words = bw.take();
  words.resize(extent_blocks_ * cfg.block_words, 0);
  for (std::size_t b = 0; b < extent_blocks_; ++b)
    session_.write(extent_of(id) + b, std::span(words).subspan(b * cfg.block_words, cfg.block_words));
}

std::size_t Persist1D::live_position(Word x) const {
  // Last live block whose smallest coordinate is <= x; blocks are x-ordered.
  std::size_t pos = 0;
  for (std::size_t i = 0; i < live_.size(); ++i) {
    const auto& recs = blocks_[live_[i]].records;
    if (recs.empty()) continue;
    const Word lo = std::min_element(recs.begin(), recs.end(), [](auto& a, auto& b) { return a.x < b.x; })->x;
    if (lo <= x)
      pos = i;
    else
      break;
  }
  return pos;
}

std::uint64_t Persist1D::start_block(Word x) const { return live_[live_position(x)]; }

std::vector<std::vector<Word>> Persist1D::live_contents() const {
  std::vector<std::vector<Word>> out;
  for (auto id : live_) {
    std::vector<Word> xs;
    for (const auto& r : blocks_[id].records) xs.push_back(r.x);
    out.push_back(std::move(xs));
  }
  return out;
}

void Persist1D::insert(Word x, Word y, Word payload, Word tag, Word aux) {
  if (finalized_) throw Error(Errc::invalid_argument, "structure already finalized");
  if (time_ >= max_time_) throw Error(Errc::capacity, "insert budget exhausted");
  const P1Record rec{x, time_ + 1, y, payload, tag, aux};
  const auto ws = widths(layout_);
  const auto fs = fields(rec);
  for (std::size_t f = 0; f < ws.size(); ++f)
    if (fs[f] > low_mask(ws[f])) throw Error(Errc::word_overflow, "record field exceeds its width");
  for (const auto& id : live_)
    for (const auto& r : blocks_[id].records)
      if (r.x == x) throw Error(Errc::invalid_argument, "duplicate coordinate");
  const Word now = ++time_;
  const std::size_t pos = live_position(x);
  const std::uint64_t id = live_[pos];
  if (blocks_[id].records.size() + 1 < session_.block_words()) {
    blocks_[id].records.push_back(rec);
    write_block(id);
    return;
  }

  // Split; the old block keeps its B-1 records and is frozen.
  std::vector<P1Record> all = blocks_[id].records;
  all.push_back(rec);
  std::sort(all.begin(), all.end(), [](const P1Record& a, const P1Record& b) { return a.x < b.x; });
  const std::size_t half = all.size() / 2;
  const std::uint64_t succ = pos + 1 < live_.size() ? live_[pos + 1] : 0;
  blocks_[id].frozen = true;
  ++splits_;
  const std::uint64_t a = create_block({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(half)});
  const std::uint64_t b = create_block({all.begin() + static_cast<std::ptrdiff_t>(half), all.end()});
  if (succ != 0) {
    blocks_[b].history.emplace_back(now, succ);
    write_block(b);
  }
  if (pos > 0) {
    blocks_[live_[pos - 1]].history.emplace_back(now, a);
    write_block(live_[pos - 1]);
  } else {
    heads_.emplace_back(now, a);
  }
  live_[pos] = a;
  live_.insert(live_.begin() + static_cast<std::ptrdiff_t>(pos) + 1, b);
}

BlockId Persist1D::finalize() {
  if (finalized_) throw Error(Errc::invalid_argument, "structure already finalized");
  finalized_ = true;
  const std::uint64_t max_id = blocks_.size() - 1;
  const Word span = max_time_ + 1;
  std::vector<Word> keys, succ;
  for (const auto& [t, id] : heads_) keys.push_back(t), succ.push_back(id);
  const auto ih = inline_history(layout_, session_.config(), max_time_);
  for (std::uint64_t i = 1; i <= max_id; ++i) {
    if (!overflows(ih, blocks_[i].history.size())) continue;
    for (const auto& [t, id] : blocks_[i].history) keys.push_back(i * span + t), succ.push_back(id);
  }
  const BlockId history =
      PackedPredecessor::build(session_, keys, succ, std::max(1u, bits_for(keys.empty() ? 0 : keys.back())), bits_for(max_id))
          .root();
  std::vector<Word> header{to_word(base_),
                           max_id,
                           to_word(history),
                           max_time_,
                           pack3(layout_.x_bits, layout_.time_bits, layout_.y_bits),
                           pack3(layout_.payload_bits, layout_.tag_bits, layout_.aux_bits)};
  return write_extent(session_, header);
}

std::uint64_t Persist1D::head_at(Session& session, BlockId header, Word t) {
  return shared_successor_at(session, read_header(session, header), 0, t);
}

std::vector<P1Record> Persist1D::query(Session& session, BlockId header, Word x1, Word x2, Word t,
                                       std::uint64_t start_id) {
  std::vector<P1Record> out;
  const Header h = read_header(session, header);
  if (start_id == 0 || start_id > h.ids) throw Error(Errc::invalid_argument, "invalid start block id");
  if (t == 0 || x1 > x2) return out;
  const auto& cfg = session.config();
  const std::size_t eb = extent_blocks_for(h.layout, cfg);
  const auto ih = inline_history(h.layout, cfg, h.max_time);
  const unsigned count_bits = bits_for(cfg.block_words - 1);
  const auto ws = widths(h.layout);
  for (std::uint64_t id = start_id; id != 0;) {
    std::vector<Word> words;
    for (std::size_t b = 0; b < eb; ++b) {
      const Block blk = session.read(h.base + (id - 1) * eb + b);
      words.insert(words.end(), blk.begin(), blk.end());
    }
    const std::uint64_t n = get_bits(words, cfg.word_bits, 0, count_bits);
    std::uint64_t pos = count_bits;
    bool past = false;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::array<Word, 6> f{};
      for (std::size_t k = 0; k < ws.size(); ++k) {
        if (ws[k] == 0) continue;
        f[k] = get_bits(words, cfg.word_bits, pos, ws[k]);
        pos += ws[k];
      }
      const P1Record r{f[0], f[1], f[2], f[3], f[4], f[5]};
      if (r.time > t) continue;
      if (r.x > x2)
        past = true;
      else if (r.x >= x1)
        out.push_back(r);
    }
    if (past) break;
    id = successor_at(session, h, ih, id, t, words);
  }
  return out;
}

std::vector<Point> sweep_order(std::vector<Point> points) {
  std::sort(points.begin(), points.end(), by_y_then_x);
  return points;
}

std::vector<std::size_t> sweep_permutation(const std::vector<Point>& points) {
  std::vector<std::size_t> idx(points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return by_y_then_x(points[a], points[b]); });
  return idx;
}

BlockId build_time_map(Session& session, const std::vector<Point>& sweep) {
  std::vector<Word> keys, times;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!keys.empty() && keys.back() == sweep[i].y) {
      times.back() = i + 1;
      continue;
    }
    keys.push_back(sweep[i].y);
    times.push_back(i + 1);
  }
  return PackedPredecessor::build(session, keys, times, session.config().word_bits, bits_for(sweep.size())).root();
}

Word time_for(Session& session, BlockId time_map, Word y) {
  auto hit = PackedPredecessor::predecessor(session, time_map, y);
  return hit ? hit->payload : 0;
}

}  // namespace emrr
