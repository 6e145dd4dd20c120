#pragma once

// Text dataset formats and seeded generators.
//   points:  one "x y" or "x y payload" per line
//   colored: one "i c" per line (set index from 1, color); sets may be listed in any order
//   corpus:  one "string<TAB>c1,c2,..." per line; the string holds no tab or newline

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "emrr/dataset.hpp"
#include "emrr/point.hpp"

namespace emrr {

std::vector<Point> read_points(std::istream& in);
void write_points(std::ostream& out, const std::vector<Point>& points);
ColoredDataset read_colored(std::istream& in);
void write_colored(std::ostream& out, const ColoredDataset& data);
Corpus read_corpus(std::istream& in);
void write_corpus(std::ostream& out, const Corpus& corpus);

/// Permutation of 1..n for x, y uniform in [0, n].
std::vector<Point> generate_points(std::size_t n, std::uint64_t seed);
/// m sets with colors in [1, sigma], sizes uniform in [0, max_set].
ColoredDataset generate_colored(std::size_t m, Word sigma, std::size_t max_set, std::uint64_t seed);
/// n distinct lowercase strings of length <= max_len with 1..4 colors in [1, sigma].
Corpus generate_corpus(std::size_t n, std::size_t max_len, Word sigma, std::uint64_t seed);

}  // namespace emrr
