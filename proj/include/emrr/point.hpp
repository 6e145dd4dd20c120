#pragma once

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

#include "emrr/emsim.hpp"

namespace emrr {

/// A point with a payload (e.g. a color) and an auxiliary tag (e.g. the tree
/// node it was copied from). Stored as four consecutive words.
struct Point {
  Word x = 0;
  Word y = 0;
  Word payload = 0;
  Word tag = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

inline constexpr std::size_t kPointWords = 4;

/// Three-sided query [x1, x2] x (-inf, y].
struct Query3 {
  Word x1 = 0;
  Word x2 = 0;
  Word y = 0;

  bool contains(const Point& p) const { return x1 <= p.x && p.x <= x2 && p.y <= y; }
};

/// Sort order used by the heap side of the trees: y, then x.
inline bool by_y_then_x(const Point& a, const Point& b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); }
inline bool by_x(const Point& a, const Point& b) { return a.x < b.x; }

inline void append_point(std::vector<Word>& out, const Point& p) {
  out.insert(out.end(), {p.x, p.y, p.payload, p.tag});
}

/// Canonical form for result comparison: sorted by (x, y, payload), tag dropped.
inline std::vector<Point> normalized(std::vector<Point> pts) {
  for (auto& p : pts) p.tag = 0;
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace emrr
