#include "emrr/strindex.hpp"

#include <algorithm>

namespace emrr {

namespace {

constexpr std::size_t kHeaderWords = 5;
constexpr std::size_t kNodeWords = 4;

unsigned bytes_per_word(const SimConfig& cfg) { return cfg.word_bits / 8; }

void append_string(std::vector<Word>& out, std::string_view s, unsigned per_word) {
  out.push_back(s.size());
  for (std::size_t i = 0; i < s.size(); i += per_word) {
    Word w = 0;
    for (unsigned j = 0; j < per_word; ++j) {
      w <<= 8;
      if (i + j < s.size()) w |= static_cast<unsigned char>(s[i + j]);
    }
    out.push_back(w);
  }
}

std::string read_string(ExtentReader& rd, Word offset, unsigned per_word) {
  const std::size_t len = static_cast<std::size_t>(rd.at(offset));
  const auto words = rd.range(offset + 1, (len + per_word - 1) / per_word);
  std::string s(len, '\0');
  for (std::size_t i = 0; i < len; ++i) {
    const unsigned shift = 8 * (per_word - 1 - i % per_word);
    s[i] = static_cast<char>((words[i / per_word] >> shift) & 0xff);
  }
  return s;
}

std::size_t common_prefix(std::string_view a, std::string_view b) {
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return static_cast<std::size_t>(ia - a.begin());
}

struct TrieWriter {
  const std::vector<std::string>& s;
  std::vector<Word> words;

  /// Node over ranks [lo, hi] (0-based); returns its record offset.
  Word node(std::size_t lo, std::size_t hi, std::size_t depth) {
    std::vector<std::pair<Word, Word>> kids;
    if (lo < hi) {
      std::size_t i = lo;
      while (i <= hi) {
        const Word key = s[i].size() == depth ? 0 : Word{static_cast<unsigned char>(s[i][depth])} + 1;
        std::size_t j = i;
        while (j + 1 <= hi && key != 0 && s[j + 1].size() > depth &&
               Word{static_cast<unsigned char>(s[j + 1][depth])} + 1 == key)
          ++j;
        const std::size_t d = key == 0 ? depth : (i == j ? s[i].size() : common_prefix(s[i], s[j]));
        kids.emplace_back(key, key == 0 ? leaf(i, depth) : node(i, j, d));
        i = j + 1;
      }
    }
    const Word off = words.size();
    words.insert(words.end(), {depth, lo + 1, hi + 1, kids.size()});
    for (const auto& [k, o] : kids) words.insert(words.end(), {k, o});
    return off;
  }

  Word leaf(std::size_t r, std::size_t depth) {
    const Word off = words.size();
    words.insert(words.end(), {depth, r + 1, r + 1, 0});
    return off;
  }
};

}  // namespace

BlockId StringIndex::build(Session& session, std::vector<std::string> strings) {
  std::sort(strings.begin(), strings.end());
  if (std::adjacent_find(strings.begin(), strings.end()) != strings.end())
    throw Error(Errc::invalid_argument, "duplicate string");
  const unsigned per_word = bytes_per_word(session.config());
  std::vector<Word> packed, offsets;
  for (const auto& s : strings) {
    offsets.push_back(packed.size());
    append_string(packed, s, per_word);
  }
  TrieWriter trie{strings, {}};
  Word root_off = 0;
  if (!strings.empty()) {
    const std::size_t last = strings.size() - 1;
    root_off = trie.node(0, last, last == 0 ? strings[0].size() : common_prefix(strings.front(), strings.back()));
  }
  std::vector<Word> header{strings.size(), to_word(write_extent(session, packed)),
                           to_word(write_extent(session, offsets)), to_word(write_extent(session, trie.words)),
                           root_off};
  return write_extent(session, header);
}

std::optional<RankInterval> StringIndex::rank_interval(Session& session, BlockId root, std::string_view p) {
  const auto h = ExtentReader(session, root, 1).range(0, kHeaderWords);
  if (h[0] == 0) return std::nullopt;
  ExtentReader trie(session, block_id(h[3]), 2);
  Word off = h[4];
  std::vector<Word> rec;
  while (true) {
    rec = trie.range(off, kNodeWords);
    const std::size_t depth = static_cast<std::size_t>(rec[0]);
    if (p.size() <= depth) break;
    const Word key = Word{static_cast<unsigned char>(p[depth])} + 1;
    // Binary search over the sorted child keys.
    std::size_t lo = 0, hi = static_cast<std::size_t>(rec[3]);
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (trie.at(off + kNodeWords + 2 * mid) < key)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == rec[3] || trie.at(off + kNodeWords + 2 * lo) != key) return std::nullopt;
    off = trie.at(off + kNodeWords + 2 * lo + 1);
  }
  const std::string rep = fetch(session, root, static_cast<std::size_t>(rec[1]));
  if (rep.compare(0, p.size(), p) != 0) return std::nullopt;
  return RankInterval{static_cast<std::size_t>(rec[1]), static_cast<std::size_t>(rec[2]),
                      rep.substr(0, static_cast<std::size_t>(rec[0]))};
}

std::string StringIndex::fetch(Session& session, BlockId root, std::size_t r) {
  const auto h = ExtentReader(session, root, 1).range(0, kHeaderWords);
  if (r == 0 || r > h[0]) throw Error(Errc::invalid_argument, "string rank out of range");
  ExtentReader strings(session, block_id(h[1]), 2);
  const Word off = ExtentReader(session, block_id(h[2]), 1).at(r - 1);
  return read_string(strings, off, bytes_per_word(session.config()));
}

}  // namespace emrr
