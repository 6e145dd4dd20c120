#pragma once

// Simulated external memory: a store of fixed-size blocks of w-bit words
// where every block transfer made through a Session is counted.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace emrr {

using Word = std::uint64_t;

enum class Errc {
  invalid_argument = 1,
  invalid_block,
  word_overflow,
  scatter_width,
  not_rank_space,
  capacity,
  misaligned,
  format,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Dense block identifier; ids are handed out 0, 1, 2, ... and never reused.
enum class BlockId : std::uint64_t {};

constexpr Word to_word(BlockId id) { return static_cast<Word>(id); }
constexpr BlockId block_id(Word w) { return static_cast<BlockId>(w); }
constexpr BlockId operator+(BlockId id, std::uint64_t k) { return block_id(to_word(id) + k); }

struct SimConfig {
  std::uint32_t block_words = 8;  // B
  std::uint32_t word_bits = 32;   // w

  std::uint64_t block_bits() const { return std::uint64_t{block_words} * word_bits; }
  Word max_word() const { return word_bits >= 64 ? ~Word{0} : (Word{1} << word_bits) - 1; }
  void validate() const;
};

struct IOStats {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t scatter_ios = 0;
};

inline IOStats operator-(const IOStats& a, const IOStats& b) {
  return {a.reads - b.reads, a.writes - b.writes, a.scatter_ios - b.scatter_ios};
}

using Block = std::vector<Word>;

/// Location of a single word, used by scatter I/O.
struct WordAddress {
  BlockId block;
  std::uint32_t offset;
};

class BlockStore {
 public:
  explicit BlockStore(SimConfig config);

  const SimConfig& config() const { return config_; }
  std::uint32_t block_words() const { return config_.block_words; }
  std::uint64_t block_count() const { return count_; }

  /// Fresh zero-filled block.
  BlockId allocate();
  /// `count` consecutive fresh blocks; returns the first id.
  BlockId allocate_extent(std::uint64_t count);

  bool valid(BlockId id) const { return to_word(id) < count_; }

  /// Uncounted view, for dumps and test introspection only.
  std::span<const Word> peek(BlockId id) const;

  /// Flat binary dump: "EMS1", block_words, word_bits, block count (u64 LE each),
  /// then every block in id order, each word big-endian in ceil(w/8) bytes.
  void dump(std::ostream& out) const;
  static BlockStore load(std::istream& in);

 private:
  friend class Session;
  void check(BlockId id) const;

  SimConfig config_;
  std::uint64_t count_ = 0;
  std::vector<Word> words_;
};

/// Per-client transfer accounting. Sessions on the same store are independent.
class Session {
 public:
  explicit Session(BlockStore& store) : store_(&store) {}

  BlockStore& store() const { return *store_; }
  const SimConfig& config() const { return store_->config(); }
  std::uint32_t block_words() const { return store_->config().block_words; }
  const IOStats& stats() const { return stats_; }

  Block read(BlockId id);
  void write(BlockId id, std::span<const Word> block);
  /// Fetches up to B arbitrarily placed words as one scatter I/O.
  std::vector<Word> scatter_read(std::span<const WordAddress> addresses);

 private:
  BlockStore* store_;
  IOStats stats_;
};

/// Allocates ceil(len/B) blocks (at least one) and writes `words` into them, zero padded.
BlockId write_extent(Session& session, std::span<const Word> words);

/// Random access to the words of an extent. Keeps the last few fetched blocks
/// in its working set so repeated touches inside them are not charged again.
class ExtentReader {
 public:
  ExtentReader(Session& session, BlockId base, std::size_t working_set = 2);

  Word at(std::uint64_t index);
  std::vector<Word> range(std::uint64_t first, std::uint64_t count);
  BlockId base() const { return base_; }

 private:
  const Block& fetch(std::uint64_t block_index);

  Session& session_;
  BlockId base_;
  std::size_t capacity_;
  std::vector<std::pair<std::uint64_t, Block>> cache_;
};

}  // namespace emrr
