#include "emrr/oracle.hpp"

#include <algorithm>
#include <set>

namespace emrr {

void ColoredDataset::validate() const {
  for (const auto& s : sets)
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i] <= s[i - 1]) throw Error(Errc::invalid_argument, "color set not strictly increasing");
}

void validate_corpus(const Corpus& corpus) {
  std::set<std::string_view> seen;
  for (const auto& e : corpus) {
    if (!seen.insert(e.text).second) throw Error(Errc::invalid_argument, "duplicate string in corpus");
    for (std::size_t i = 1; i < e.colors.size(); ++i)
      if (e.colors[i] <= e.colors[i - 1]) throw Error(Errc::invalid_argument, "color set not strictly increasing");
  }
}

namespace oracle {

std::vector<Point> brute_threesided(const std::vector<Point>& points, const Query3& q) {
  std::vector<Point> out;
  for (const auto& p : points)
    if (q.contains(p)) out.push_back(p);
  return out;
}

std::vector<Point> sorted_scan_threesided(std::vector<Point> points, const Query3& q) {
  std::sort(points.begin(), points.end(), by_x);
  auto lo = std::lower_bound(points.begin(), points.end(), q.x1, [](const Point& p, Word x) { return p.x < x; });
  std::vector<Point> out;
  for (auto it = lo; it != points.end() && it->x <= q.x2; ++it)
    if (it->y <= q.y) out.push_back(*it);
  return out;
}

std::vector<Word> brute_colored(const ColoredDataset& data, std::size_t a, std::size_t b) {
  std::set<Word> acc;
  for (std::size_t i = a; i <= b && i >= 1 && i <= data.sets.size(); ++i) acc.insert(data.sets[i - 1].begin(), data.sets[i - 1].end());
  return {acc.begin(), acc.end()};
}

std::vector<Word> brute_prefix(const Corpus& corpus, std::string_view p) {
  std::set<Word> acc;
  for (const auto& e : corpus)
    if (std::string_view(e.text).substr(0, p.size()) == p) acc.insert(e.colors.begin(), e.colors.end());
  return {acc.begin(), acc.end()};
}

std::vector<Word> brute_topk(const Corpus& corpus, std::string_view p, std::size_t k) {
  auto all = brute_prefix(corpus, p);
  if (all.size() > k) all.erase(all.begin(), all.end() - static_cast<std::ptrdiff_t>(k));
  return all;
}

}  // namespace oracle
}  // namespace emrr
