#pragma once

// Brute-force reference answers. None of these touch the block store; they
// define what each structure must report, not what it may cost.

#include <string_view>
#include <vector>

#include "emrr/dataset.hpp"
#include "emrr/point.hpp"

namespace emrr::oracle {

std::vector<Point> brute_threesided(const std::vector<Point>& points, const Query3& q);

/// Second, independent formulation: sort by x, binary-search the x-range, filter y.
std::vector<Point> sorted_scan_threesided(std::vector<Point> points, const Query3& q);

/// Union of C_a..C_b (1-based, inclusive), sorted ascending. Empty when a > b.
std::vector<Word> brute_colored(const ColoredDataset& data, std::size_t a, std::size_t b);

/// Union of c(x) over strings x with prefix p, sorted ascending.
std::vector<Word> brute_prefix(const Corpus& corpus, std::string_view p);

/// The k largest colors of brute_prefix, ascending.
std::vector<Word> brute_topk(const Corpus& corpus, std::string_view p, std::size_t k);

}  // namespace emrr::oracle
