#include "emrr/emsim.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>

namespace emrr {

void SimConfig::validate() const {
  if (block_words < 2) throw Error(Errc::invalid_argument, "block_words must be >= 2");
  if (word_bits < 16 || word_bits > 64) throw Error(Errc::invalid_argument, "word_bits must be in [16, 64]");
}

BlockStore::BlockStore(SimConfig config) : config_(config) { config_.validate(); }

BlockId BlockStore::allocate() { return allocate_extent(1); }

BlockId BlockStore::allocate_extent(std::uint64_t count) {
  if (count == 0) throw Error(Errc::invalid_argument, "empty extent");
  BlockId first = block_id(count_);
  count_ += count;
  words_.resize(count_ * config_.block_words, 0);
  return first;
}

void BlockStore::check(BlockId id) const {
  if (!valid(id)) throw Error(Errc::invalid_block, "invalid block " + std::to_string(to_word(id)));
}

std::span<const Word> BlockStore::peek(BlockId id) const {
  check(id);
  return {words_.data() + to_word(id) * config_.block_words, config_.block_words};
}

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64_le(std::istream& in) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) throw Error(Errc::format, "truncated store header");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

void BlockStore::dump(std::ostream& out) const {
  out.write("EMS1", 4);
  put_u64_le(out, config_.block_words);
  put_u64_le(out, config_.word_bits);
  put_u64_le(out, count_);
  const unsigned bytes = (config_.word_bits + 7) / 8;
  std::vector<char> buf(bytes);
  for (Word w : words_) {
    for (unsigned i = 0; i < bytes; ++i) buf[i] = static_cast<char>((w >> (8 * (bytes - 1 - i))) & 0xff);
    out.write(buf.data(), bytes);
  }
  if (!out) throw Error(Errc::io, "store dump failed");
}

BlockStore BlockStore::load(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "EMS1") throw Error(Errc::format, "bad store magic");
  SimConfig cfg;
  std::uint64_t bw = get_u64_le(in);
  std::uint64_t wb = get_u64_le(in);
  std::uint64_t count = get_u64_le(in);
  if (bw > (1u << 20) || wb > 64) throw Error(Errc::format, "bad store parameters");
  cfg.block_words = static_cast<std::uint32_t>(bw);
  cfg.word_bits = static_cast<std::uint32_t>(wb);
  BlockStore store(cfg);
  if (count == 0) return store;
  store.allocate_extent(count);
  const unsigned bytes = (cfg.word_bits + 7) / 8;
  std::vector<unsigned char> buf(bytes);
  for (Word& w : store.words_) {
    in.read(reinterpret_cast<char*>(buf.data()), bytes);
    if (!in) throw Error(Errc::format, "truncated store body");
    w = 0;
    for (unsigned i = 0; i < bytes; ++i) w = (w << 8) | buf[i];
    if (w > cfg.max_word()) throw Error(Errc::format, "word overflow in dump");
  }
  return store;
}

Block Session::read(BlockId id) {
  store_->check(id);
  ++stats_.reads;
  const auto view = store_->peek(id);
  return Block(view.begin(), view.end());
}

void Session::write(BlockId id, std::span<const Word> block) {
  store_->check(id);
  const auto& cfg = store_->config();
  if (block.size() != cfg.block_words) throw Error(Errc::invalid_argument, "block size mismatch");
  for (Word w : block)
    if (w > cfg.max_word()) throw Error(Errc::word_overflow, "word overflow");
  std::copy(block.begin(), block.end(), store_->words_.begin() + to_word(id) * cfg.block_words);
  ++stats_.writes;
}

std::vector<Word> Session::scatter_read(std::span<const WordAddress> addresses) {
  const auto& cfg = store_->config();
  if (addresses.size() > cfg.block_words) throw Error(Errc::scatter_width, "scatter width exceeded");
  std::vector<Word> out;
  out.reserve(addresses.size());
  for (const auto& a : addresses) {
    store_->check(a.block);
    if (a.offset >= cfg.block_words) throw Error(Errc::invalid_block, "invalid word offset");
    out.push_back(store_->words_[to_word(a.block) * cfg.block_words + a.offset]);
  }
  if (!addresses.empty()) ++stats_.scatter_ios;
  return out;
}

BlockId write_extent(Session& session, std::span<const Word> words) {
  const std::uint32_t bw = session.block_words();
  const std::uint64_t blocks = std::max<std::uint64_t>(1, (words.size() + bw - 1) / bw);
  BlockId first = session.store().allocate_extent(blocks);
  Block buf(bw);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    std::fill(buf.begin(), buf.end(), 0);
    for (std::uint32_t i = 0; i < bw && b * bw + i < words.size(); ++i) buf[i] = words[b * bw + i];
    session.write(first + b, buf);
  }
  return first;
}

ExtentReader::ExtentReader(Session& session, BlockId base, std::size_t working_set)
    : session_(session), base_(base), capacity_(std::max<std::size_t>(1, working_set)) {}

const Block& ExtentReader::fetch(std::uint64_t block_index) {
  for (auto& [idx, blk] : cache_)
    if (idx == block_index) return blk;
  if (cache_.size() == capacity_) cache_.erase(cache_.begin());
  cache_.emplace_back(block_index, session_.read(base_ + block_index));
  return cache_.back().second;
}

Word ExtentReader::at(std::uint64_t index) {
  const std::uint32_t bw = session_.block_words();
  return fetch(index / bw)[index % bw];
}

std::vector<Word> ExtentReader::range(std::uint64_t first, std::uint64_t count) {
  std::vector<Word> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(at(first + i));
  return out;
}

}  // namespace emrr
