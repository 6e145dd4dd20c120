#pragma once

// Insertion-only 1D range reporting over a linked list of blocks, made
// partially persistent.
//
// A logical block holds at most B-1 records, unsorted. Reaching B records
// splits it around the median into two new blocks; the old block is frozen
// and never written again. Block ids count up from 1 in creation order and
// logical blocks are laid out back to back, so id i lives at
// base + (i-1) * extent_blocks.
//
// Records are bit-packed with per-structure field widths; a zero width drops
// the field. A logical block is [count, record...] as one bit stream.
//
// A block's successor history is final once the block is frozen, so it is
// stored in the spare bits after the B-1 record slots of its own extent and
// costs no extra read. Histories that do not fit, and the list head's history
// (id 0), go to one shared packed predecessor keyed by
// id * (max_time + 1) + change time. A split creates the pair (a, b) with a
// even and b = a + 1, so a's first successor and the head's first block are
// implicit.
//
// Header: [base, id count, history root, max_time, widths(x, time, y),
//          widths(payload, tag, aux)], widths packed 7 bits each.

#include <cstdint>
#include <vector>

#include "emrr/emsim.hpp"
#include "emrr/point.hpp"

namespace emrr {

struct P1Record {
  Word x = 0;
  Word time = 0;
  Word y = 0;
  Word payload = 0;
  Word tag = 0;
  Word aux = 0;

  friend bool operator==(const P1Record&, const P1Record&) = default;
  friend auto operator<=>(const P1Record&, const P1Record&) = default;
};

inline Point to_point(const P1Record& r) { return {r.x, r.y, r.payload, r.tag}; }

struct P1Layout {
  unsigned x_bits = 32;
  unsigned time_bits = 32;
  unsigned y_bits = 0;
  unsigned payload_bits = 0;
  unsigned tag_bits = 0;
  unsigned aux_bits = 0;

  unsigned record_bits() const { return x_bits + time_bits + y_bits + payload_bits + tag_bits + aux_bits; }
  /// Coordinates and times only.
  static P1Layout compact(unsigned x_bits, Word max_time);
  /// Full points (word-wide x, y, payload, tag) plus aux up to max_aux.
  static P1Layout full(const SimConfig& cfg, Word max_time, Word max_aux);
  /// Widths just large enough for these points.
  static P1Layout fitted(const std::vector<Point>& points, Word max_time, Word max_aux);
};

class Persist1D {
 public:
  /// max_time bounds the number of inserts.
  Persist1D(Session& session, const P1Layout& layout, Word max_time);

  /// Inserts at time time()+1. Coordinates must be distinct.
  void insert(Word x, Word y = 0, Word payload = 0, Word tag = 0, Word aux = 0);

  /// Writes the history structure and header; returns the header block.
  /// No inserts are accepted afterwards.
  BlockId finalize();

  /// Number of inserts so far; the latest point has this time.
  Word time() const { return time_; }
  std::uint64_t id_count() const { return blocks_.size() - 1; }
  std::uint64_t splits() const { return splits_; }
  std::size_t extent_blocks() const { return extent_blocks_; }

  std::uint64_t head_block() const { return live_.front(); }
  /// Live block holding the predecessor of x now (the head if none).
  std::uint64_t start_block(Word x) const;
  /// Coordinates of each live block, in list order.
  std::vector<std::vector<Word>> live_contents() const;
  BlockId extent_of(std::uint64_t id) const { return base_ + (id - 1) * extent_blocks_; }
  bool frozen(std::uint64_t id) const { return blocks_.at(id).frozen; }

  /// Every record (x in [x1, x2], time <= t), starting from block start_id,
  /// which must be the block that held pred(x1) at time t.
  static std::vector<P1Record> query(Session& session, BlockId header, Word x1, Word x2, Word t,
                                     std::uint64_t start_id);
  /// Head block of the list at time t.
  static std::uint64_t head_at(Session& session, BlockId header, Word t);

 private:
  struct LBlock {
    std::vector<P1Record> records;
    std::vector<std::pair<Word, Word>> history;  // (time, successor id)
    bool frozen = false;
  };

  std::uint64_t create_block(std::vector<P1Record> records);
  void write_block(std::uint64_t id);
  std::size_t live_position(Word x) const;

  Session& session_;
  P1Layout layout_;
  Word max_time_;
  std::size_t extent_blocks_;
  BlockId base_{};
  std::vector<LBlock> blocks_;                // index 0 unused
  std::vector<std::uint64_t> live_;           // live ids in list order
  std::vector<std::pair<Word, Word>> heads_;  // (time, head id)
  Word time_ = 0;
  std::uint64_t splits_ = 0;
  bool finalized_ = false;
};

/// y-sweep helpers shared by the node structures built on top of this list.
/// Sweep order is (y, x); the i-th point in it is inserted at time i.
std::vector<Point> sweep_order(std::vector<Point> points);
/// Indices of `points` in sweep order.
std::vector<std::size_t> sweep_permutation(const std::vector<Point>& points);
/// Distinct y -> last sweep time with that y.
BlockId build_time_map(Session& session, const std::vector<Point>& sweep);
/// Number of points with y' <= y, i.e. the version to query. 0 when none.
Word time_for(Session& session, BlockId time_map, Word y);

}  // namespace emrr
