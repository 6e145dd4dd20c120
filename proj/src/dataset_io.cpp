#include "emrr/dataset_io.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "emrr/rng.hpp"

namespace emrr {

namespace {

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
  throw Error(Errc::format, "line " + std::to_string(line) + ": " + why);
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

Word parse_word(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) bad_line(line, "expected an integer");
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    bad_line(line, "integer out of range");
  }
}

std::vector<std::string> fields(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

}  // namespace

std::vector<Point> read_points(std::istream& in) {
  std::vector<Point> out;
  std::size_t line = 0;
  for (std::string s; std::getline(in, s);) {
    ++line;
    if (blank(s)) continue;
    const auto f = fields(s);
    if (f.size() != 2 && f.size() != 3) bad_line(line, "expected \"x y\" or \"x y payload\"");
    out.push_back({parse_word(f[0], line), parse_word(f[1], line), f.size() == 3 ? parse_word(f[2], line) : 0, 0});
  }
  return out;
}

void write_points(std::ostream& out, const std::vector<Point>& points) {
  for (const auto& p : points) out << p.x << ' ' << p.y << ' ' << p.payload << '\n';
}

ColoredDataset read_colored(std::istream& in) {
  std::map<Word, std::set<Word>> sets;
  Word m = 0;
  std::size_t line = 0;
  for (std::string s; std::getline(in, s);) {
    ++line;
    if (blank(s)) continue;
    const auto f = fields(s);
    if (f.size() != 2) bad_line(line, "expected \"i c\"");
    const Word i = parse_word(f[0], line), c = parse_word(f[1], line);
    if (i == 0) bad_line(line, "set index starts at 1");
    if (!sets[i].insert(c).second) bad_line(line, "duplicate color in set");
    m = std::max(m, i);
  }
  ColoredDataset d;
  d.sets.resize(m);
  for (auto& [i, cs] : sets) d.sets[i - 1].assign(cs.begin(), cs.end());
  return d;
}

void write_colored(std::ostream& out, const ColoredDataset& data) {
  for (std::size_t i = 0; i < data.sets.size(); ++i)
    for (Word c : data.sets[i]) out << i + 1 << ' ' << c << '\n';
}

Corpus read_corpus(std::istream& in) {
  Corpus out;
  std::size_t line = 0;
  for (std::string s; std::getline(in, s);) {
    ++line;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    if (s.empty()) continue;
    const auto tab = s.find('\t');
    if (tab == std::string::npos || s.find('\t', tab + 1) != std::string::npos)
      bad_line(line, "expected \"string<TAB>c1,c2,...\"");
    CorpusEntry e{s.substr(0, tab), {}};
    std::istringstream cs(s.substr(tab + 1));
    for (std::string tok; std::getline(cs, tok, ',');) e.colors.push_back(parse_word(tok, line));
    std::sort(e.colors.begin(), e.colors.end());
    if (std::adjacent_find(e.colors.begin(), e.colors.end()) != e.colors.end()) bad_line(line, "duplicate color");
    out.push_back(std::move(e));
  }
  validate_corpus(out);
  return out;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& e : corpus) {
    out << e.text << '\t';
    for (std::size_t i = 0; i < e.colors.size(); ++i) out << (i ? "," : "") << e.colors[i];
    out << '\n';
  }
}

std::vector<Point> generate_points(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Word> xs(n);
  std::iota(xs.begin(), xs.end(), Word{1});
  std::shuffle(xs.begin(), xs.end(), rng);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({xs[i], rng.uniform(0, n), i, 0});
  return out;
}

ColoredDataset generate_colored(std::size_t m, Word sigma, std::size_t max_set, std::uint64_t seed) {
  if (sigma == 0) throw Error(Errc::invalid_argument, "sigma must be positive");
  SplitMix64 rng(seed);
  ColoredDataset d;
  for (std::size_t i = 0; i < m; ++i) {
    std::set<Word> cs;
    for (std::size_t j = rng.uniform(0, max_set); j > 0; --j) cs.insert(rng.uniform(1, sigma));
    d.sets.emplace_back(cs.begin(), cs.end());
  }
  return d;
}

Corpus generate_corpus(std::size_t n, std::size_t max_len, Word sigma, std::uint64_t seed) {
  if (sigma == 0) throw Error(Errc::invalid_argument, "sigma must be positive");
  SplitMix64 rng(seed);
  std::set<std::string> seen;
  Corpus out;
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 100 * (n + 10)) throw Error(Errc::capacity, "cannot draw that many distinct strings");
    std::string s(rng.uniform(0, max_len), 'a');
    for (auto& ch : s) ch = static_cast<char>('a' + rng.uniform(0, 25));
    if (!seen.insert(s).second) continue;
    std::set<Word> cs;
    for (std::size_t j = rng.uniform(1, 4); j > 0; --j) cs.insert(rng.uniform(1, sigma));
    out.push_back({s, {cs.begin(), cs.end()}});
  }
  return out;
}

}  // namespace emrr
