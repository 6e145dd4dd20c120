#pragma once

// MSB-first bit packing into w-bit words. Bit 0 is the most significant bit
// of word 0; a field may straddle word boundaries.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "emrr/emsim.hpp"

namespace emrr {

/// Bits needed to represent every value in [0, max_value].
inline unsigned bits_for(std::uint64_t max_value) {
  return max_value == 0 ? 1u : static_cast<unsigned>(std::bit_width(max_value));
}

/// Index of the highest set bit (x != 0).
inline unsigned msb_index(std::uint64_t x) { return static_cast<unsigned>(std::bit_width(x)) - 1; }

class BitWriter {
 public:
  explicit BitWriter(unsigned word_bits) : word_bits_(word_bits) {}

  void put(std::uint64_t value, unsigned width);
  std::uint64_t bit_size() const { return bits_; }
  const std::vector<Word>& words() const { return words_; }
  std::vector<Word> take() { return std::move(words_); }

 private:
  unsigned word_bits_;
  std::uint64_t bits_ = 0;
  std::vector<Word> words_;
};

std::uint64_t get_bits(std::span<const Word> words, unsigned word_bits, std::uint64_t bit_pos, unsigned width);

}  // namespace emrr
