#pragma once

// Block-resident static predecessor search over small key sets.
//
// A node packs its header, the distinguishing bit positions of its keys and
// one sketch per key into a single block. A query reads that block, ranks the
// query's sketch in memory, reads the (at most two) candidate keys to find the
// longest common prefix, re-ranks a corrected probe, and finally reads the
// record of the answer. Nodes hold at most node_capacity() keys; larger sets
// are split into groups under a top node whose payloads are child roots.
//
// Node extent layout (consecutive blocks):
//   [0]       header: m:16 key_bits:8 payload_bits:8 s:8 flags:8,
//             then s positions (6 bits each), then m sketches (s bits each)
//   [1 ..]    (key, payload) records, floor(b / (key_bits + payload_bits))
//             per block, never straddling a block boundary
// flags: bit 0 = sorted-scan mode, bit 1 = interior node.

#include <optional>
#include <span>

#include "emrr/emsim.hpp"

namespace emrr {

enum class PredMode : std::uint8_t { sketch = 0, sorted_scan = 1 };

struct PredHit {
  Word key;
  Word payload;
  friend bool operator==(const PredHit&, const PredHit&) = default;
};

class PackedPredecessor {
 public:
  /// Keys must be strictly increasing and fit `key_bits`; payloads fit `payload_bits`.
  static PackedPredecessor build(Session& session, std::span<const Word> keys, std::span<const Word> payloads,
                                 unsigned key_bits, unsigned payload_bits, PredMode mode = PredMode::sketch);

  /// Largest key <= q with its payload.
  static std::optional<PredHit> predecessor(Session& session, BlockId root, Word q);

  /// Largest number of keys a single node can hold for this block size.
  static std::size_t node_capacity(const SimConfig& cfg, unsigned key_bits);

  BlockId root() const { return root_; }
  std::size_t size() const { return size_; }
  unsigned levels() const { return levels_; }
  std::uint64_t blocks_used() const { return blocks_; }

  std::optional<PredHit> predecessor(Session& session, Word q) const { return predecessor(session, root_, q); }

 private:
  BlockId root_{};
  std::size_t size_ = 0;
  unsigned levels_ = 1;
  std::uint64_t blocks_ = 0;
};

}  // namespace emrr
