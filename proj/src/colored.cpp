#include "emrr/colored.hpp"

#include <algorithm>
#include <unordered_map>

#include "emrr/checks.hpp"

namespace emrr {

namespace {

constexpr std::size_t kRangeHeader = 4;
constexpr std::size_t kPrefixHeader = 2;

}  // namespace

std::vector<Point> reduce_colored(const ColoredDataset& data) {
  data.validate();
  std::vector<Point> out;
  std::unordered_map<Word, Word> last;  // color -> flat coordinate of its latest occurrence
  Word flat = 0;
  for (const auto& set : data.sets) {
    for (Word c : set) {
      ++flat;
      auto [it, fresh] = last.try_emplace(c, 0);
      out.push_back({flat, it->second, c, 0});
      it->second = flat;
    }
  }
  return out;
}

BlockId ColoredRange::build(Session& session, const ColoredDataset& data, const TopConfig& config) {
  const auto points = reduce_colored(data);
  for (const auto& p : points)
    if (p.payload > session.config().max_word()) throw Error(Errc::word_overflow, "color exceeds word size");
  std::vector<Word> prefix{0};
  for (const auto& s : data.sets) prefix.push_back(prefix.back() + s.size());
  const BlockId top = ThreeSided::build(session, points, config).root;
  const std::vector<Word> header{data.sets.size(), points.size(), to_word(write_extent(session, prefix)),
                                 to_word(top)};
  return write_extent(session, header);
}

std::vector<Word> ColoredRange::query(Session& session, BlockId root, std::size_t a, std::size_t b,
                                      ColoredTrace* trace) {
  const auto h = ExtentReader(session, root, 1).range(0, kRangeHeader);
  const std::size_t m = static_cast<std::size_t>(h[0]);
  std::vector<Word> out;
  if (m == 0) return out;
  if (a < 1 || a > m || b < 1 || b > m) throw Error(Errc::invalid_argument, "set index out of range");
  if (a > b) return out;
  ExtentReader prefix(session, block_id(h[2]), 2);
  const Word af = 1 + prefix.at(a - 1), bf = prefix.at(b);
  if (trace) trace->a_flat = af, trace->b_flat = bf;
  if (af > bf) return out;
  const auto pts = ThreeSided::query(session, block_id(h[3]), af, bf, af - 1, trace ? &trace->top : nullptr);
  if (trace) trace->raw_reported = pts.size();
  for (const auto& p : pts) out.push_back(p.payload);
  std::sort(out.begin(), out.end());
  EMRR_CHECK(one_witness, std::adjacent_find(out.begin(), out.end()) == out.end());
  return out;
}

BlockId ColoredPrefix::build(Session& session, const Corpus& corpus, const TopConfig& config) {
  validate_corpus(corpus);
  std::vector<const CorpusEntry*> sorted;
  for (const auto& e : corpus) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->text < y->text; });
  std::vector<std::string> strings;
  ColoredDataset sets;
  for (const auto* e : sorted) {
    strings.push_back(e->text);
    sets.sets.push_back(e->colors);
  }
  const BlockId index = StringIndex::build(session, std::move(strings));
  const BlockId range = ColoredRange::build(session, sets, config);
  const std::vector<Word> header{to_word(index), to_word(range)};
  return write_extent(session, header);
}

std::optional<RankInterval> ColoredPrefix::rank_interval(Session& session, BlockId root, std::string_view p) {
  const auto h = ExtentReader(session, root, 1).range(0, kPrefixHeader);
  return StringIndex::rank_interval(session, block_id(h[0]), p);
}

std::vector<Word> ColoredPrefix::query(Session& session, BlockId root, std::string_view p) {
  const auto h = ExtentReader(session, root, 1).range(0, kPrefixHeader);
  const auto iv = StringIndex::rank_interval(session, block_id(h[0]), p);
  if (!iv) return {};
  return ColoredRange::query(session, block_id(h[1]), iv->lo, iv->hi);
}

}  // namespace emrr
