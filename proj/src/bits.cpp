#include "emrr/bits.hpp"

namespace emrr {

void BitWriter::put(std::uint64_t value, unsigned width) {
  for (unsigned i = 0; i < width; ++i) {
    const std::uint64_t bit = (value >> (width - 1 - i)) & 1u;
    const std::uint64_t w = bits_ / word_bits_;
    const unsigned off = static_cast<unsigned>(bits_ % word_bits_);
    if (w == words_.size()) words_.push_back(0);
    if (bit) words_[w] |= Word{1} << (word_bits_ - 1 - off);
    ++bits_;
  }
}

std::uint64_t get_bits(std::span<const Word> words, unsigned word_bits, std::uint64_t bit_pos, unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i, ++bit_pos) {
    const std::uint64_t w = bit_pos / word_bits;
    const unsigned off = static_cast<unsigned>(bit_pos % word_bits);
    const std::uint64_t bit = w < words.size() ? (words[w] >> (word_bits - 1 - off)) & 1u : 0;
    v = (v << 1) | bit;
  }
  return v;
}

}  // namespace emrr
