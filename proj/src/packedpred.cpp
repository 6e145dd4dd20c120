#include "emrr/packedpred.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "emrr/bits.hpp"

namespace emrr {

namespace {

constexpr unsigned kHeaderBits = 48;
constexpr unsigned kPosBits = 6;
constexpr Word kFlagSorted = 1;
constexpr Word kFlagInterior = 2;

std::uint64_t sketch_of(Word v, std::span<const unsigned> positions) {
  std::uint64_t s = 0;
  for (unsigned p : positions) s = (s << 1) | ((v >> p) & 1u);
  return s;
}

Word low_mask(unsigned bits) { return bits >= 64 ? ~Word{0} : (Word{1} << bits) - 1; }

struct NodeHeader {
  std::size_t m = 0;
  unsigned key_bits = 0;
  unsigned payload_bits = 0;
  Word flags = 0;
  std::vector<unsigned> positions;  // most significant first
  std::vector<std::uint64_t> sketches;
};

NodeHeader parse_header(const Block& blk, unsigned word_bits) {
  NodeHeader h;
  std::uint64_t pos = 0;
  auto take = [&](unsigned width) {
    auto v = get_bits(blk, word_bits, pos, width);
    pos += width;
    return v;
  };
  h.m = take(16);
  h.key_bits = static_cast<unsigned>(take(8));
  h.payload_bits = static_cast<unsigned>(take(8));
  const auto s = static_cast<unsigned>(take(8));
  h.flags = take(8);
  h.positions.resize(s);
  for (auto& p : h.positions) p = static_cast<unsigned>(take(kPosBits));
  if (!(h.flags & kFlagSorted)) {
    h.sketches.resize(h.m);
    for (auto& sk : h.sketches) sk = take(s);
  }
  return h;
}

struct NodeReader {
  Session& session;
  BlockId root;
  const NodeHeader& h;
  ExtentReader extent;
  std::uint64_t per_block;
  std::uint32_t word_bits;

  NodeReader(Session& s, BlockId r, const NodeHeader& hdr)
      : session(s), root(r), h(hdr), extent(s, r + 1, 3),
        per_block(s.config().block_bits() / (hdr.key_bits + hdr.payload_bits)),
        word_bits(s.config().word_bits) {}

  PredHit record(std::size_t i) {
    const std::uint64_t blk = i / per_block;
    const std::uint64_t bit = (i % per_block) * (h.key_bits + h.payload_bits);
    const auto bw = session.block_words();
    std::vector<Word> words = extent.range(blk * bw, bw);
    return {get_bits(words, word_bits, bit, h.key_bits), get_bits(words, word_bits, bit + h.key_bits, h.payload_bits)};
  }
};

std::optional<std::size_t> sketch_search(NodeReader& rd, Word q) {
  const auto& h = rd.h;
  const auto& sk = h.sketches;
  const std::uint64_t sq = sketch_of(q, h.positions);
  const auto i = static_cast<std::size_t>(std::upper_bound(sk.begin(), sk.end(), sq) - sk.begin());

  // The key sharing the longest prefix with q is one of the two sketch neighbours.
  std::optional<PredHit> best;
  for (std::size_t c : {i - 1, i}) {
    if (c >= h.m) continue;  // also catches i - 1 underflow
    PredHit hit = rd.record(c);
    if (hit.key == q) return c;
    if (!best || msb_index(hit.key ^ q) < msb_index(best->key ^ q)) best = hit;
  }
  const unsigned d = msb_index(best->key ^ q);
  const Word high = q & ~low_mask(d + 1);
  std::size_t count;
  if ((q >> d) & 1u) {
    const Word e = high | low_mask(d);
    count = static_cast<std::size_t>(std::upper_bound(sk.begin(), sk.end(), sketch_of(e, h.positions)) - sk.begin());
  } else {
    const Word e = high | (Word{1} << d);
    count = static_cast<std::size_t>(std::lower_bound(sk.begin(), sk.end(), sketch_of(e, h.positions)) - sk.begin());
  }
  if (count == 0) return std::nullopt;
  return count - 1;
}

std::optional<std::size_t> sorted_search(NodeReader& rd, Word q) {
  // Largest record block whose first key is <= q, then scan inside it.
  const std::size_t blocks = (rd.h.m + rd.per_block - 1) / rd.per_block;
  if (rd.record(0).key > q) return std::nullopt;
  std::size_t lo = 0, hi = blocks;  // first key of lo <= q; of hi (if any) > q
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (rd.record(mid * rd.per_block).key <= q)
      lo = mid;
    else
      hi = mid;
  }
  std::size_t ans = lo * rd.per_block;
  for (std::size_t j = ans + 1; j < std::min(rd.h.m, (lo + 1) * rd.per_block) && rd.record(j).key <= q; ++j) ans = j;
  return ans;
}

BlockId build_node(Session& session, std::span<const Word> keys, std::span<const Word> payloads, unsigned key_bits,
                   unsigned payload_bits, PredMode mode, bool interior, std::uint64_t& blocks) {
  const auto& cfg = session.config();
  const std::size_t m = keys.size();

  std::vector<unsigned> positions;
  if (mode == PredMode::sketch) {
    for (std::size_t i = 1; i < m; ++i) positions.push_back(msb_index(keys[i - 1] ^ keys[i]));
    std::sort(positions.begin(), positions.end(), std::greater<>());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  }
  const auto s = static_cast<unsigned>(positions.size());

  BitWriter header(cfg.word_bits);
  header.put(m, 16);
  header.put(key_bits, 8);
  header.put(payload_bits, 8);
  header.put(s, 8);
  header.put((mode == PredMode::sorted_scan ? kFlagSorted : 0) | (interior ? kFlagInterior : 0), 8);
  for (unsigned p : positions) header.put(p, kPosBits);
  if (mode == PredMode::sketch)
    for (Word k : keys) header.put(sketch_of(k, positions), s);
  if (header.bit_size() > cfg.block_bits()) throw Error(Errc::capacity, "packed predecessor header overflow");

  const std::uint64_t per_block = cfg.block_bits() / (key_bits + payload_bits);
  const std::uint64_t record_blocks = (m + per_block - 1) / per_block;
  BlockId root = session.store().allocate_extent(1 + record_blocks);
  blocks += 1 + record_blocks;

  Block buf(cfg.block_words, 0);
  auto hw = header.words();
  std::copy(hw.begin(), hw.end(), buf.begin());
  session.write(root, buf);
  for (std::uint64_t b = 0; b < record_blocks; ++b) {
    BitWriter rec(cfg.word_bits);
    for (std::uint64_t i = b * per_block; i < std::min<std::uint64_t>(m, (b + 1) * per_block); ++i) {
      rec.put(keys[i], key_bits);
      rec.put(payloads[i], payload_bits);
    }
    std::fill(buf.begin(), buf.end(), 0);
    auto rw = rec.words();
    std::copy(rw.begin(), rw.end(), buf.begin());
    session.write(root + 1 + b, buf);
  }
  return root;
}

}  // namespace

std::size_t PackedPredecessor::node_capacity(const SimConfig& cfg, unsigned /*key_bits*/) {
  const std::uint64_t b = cfg.block_bits();
  std::size_t cap = static_cast<std::size_t>(std::sqrt(static_cast<double>(b)));
  while (cap * cap > b) --cap;
  while (cap > 2 && kHeaderBits + kPosBits * (cap - 1) + cap * (cap - 1) > b) --cap;
  return std::min<std::size_t>(cap, 0xffff);
}

PackedPredecessor PackedPredecessor::build(Session& session, std::span<const Word> keys,
                                           std::span<const Word> payloads, unsigned key_bits, unsigned payload_bits,
                                           PredMode mode) {
  const auto& cfg = session.config();
  if (keys.size() != payloads.size()) throw Error(Errc::invalid_argument, "keys/payloads length mismatch");
  if (key_bits == 0 || key_bits > 64 || payload_bits == 0 || payload_bits > 64)
    throw Error(Errc::invalid_argument, "field width out of range");
  if (key_bits > cfg.block_bits()) throw Error(Errc::invalid_argument, "key_bits exceeds block_bits");
  if (key_bits + payload_bits > cfg.block_bits()) throw Error(Errc::capacity, "record exceeds block");
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i > 0 && keys[i] <= keys[i - 1]) throw Error(Errc::invalid_argument, "keys not strictly increasing");
    if (keys[i] > low_mask(key_bits)) throw Error(Errc::invalid_argument, "key exceeds key_bits");
    if (payloads[i] > low_mask(payload_bits)) throw Error(Errc::invalid_argument, "payload exceeds payload_bits");
  }

  PackedPredecessor out;
  out.size_ = keys.size();
  const std::size_t cap = node_capacity(cfg, key_bits);
  if (keys.size() <= cap) {
    out.root_ = build_node(session, keys, payloads, key_bits, payload_bits, mode, false, out.blocks_);
    return out;
  }

  // Groups of `cap` keys; each level above indexes the first key of each group.
  std::vector<Word> level_keys(keys.begin(), keys.end());
  std::vector<Word> level_payloads(payloads.begin(), payloads.end());
  unsigned level_payload_bits = payload_bits;
  bool interior = false;
  unsigned levels = 0;
  while (true) {
    ++levels;
    if (level_keys.size() <= cap) {
      out.root_ = build_node(session, level_keys, level_payloads, key_bits, level_payload_bits, mode, interior,
                             out.blocks_);
      break;
    }
    std::vector<Word> next_keys, next_payloads;
    for (std::size_t g = 0; g < level_keys.size(); g += cap) {
      const std::size_t len = std::min(cap, level_keys.size() - g);
      BlockId child = build_node(session, std::span(level_keys).subspan(g, len),
                                 std::span(level_payloads).subspan(g, len), key_bits, level_payload_bits, mode,
                                 interior, out.blocks_);
      next_keys.push_back(level_keys[g]);
      next_payloads.push_back(to_word(child));
    }
    level_payload_bits = bits_for(*std::max_element(next_payloads.begin(), next_payloads.end()));
    level_keys = std::move(next_keys);
    level_payloads = std::move(next_payloads);
    interior = true;
  }
  out.levels_ = levels;
  return out;
}

std::optional<PredHit> PackedPredecessor::predecessor(Session& session, BlockId root, Word q) {
  while (true) {
    const NodeHeader h = parse_header(session.read(root), session.config().word_bits);
    if (h.m == 0) return std::nullopt;
    NodeReader rd(session, root, h);
    const auto idx = (h.flags & kFlagSorted) ? sorted_search(rd, q) : sketch_search(rd, q);
    if (!idx) return std::nullopt;
    const PredHit hit = rd.record(*idx);
    if (!(h.flags & kFlagInterior)) return hit;
    root = block_id(hit.payload);
  }
}

}  // namespace emrr
