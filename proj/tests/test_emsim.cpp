#include <sstream>

#include "doctest.h"
#include "emrr/emsim.hpp"
#include "emrr/rng.hpp"

using namespace emrr;

TEST_CASE("allocation is dense and zero filled") {
  BlockStore store({4, 32});
  CHECK(store.allocate() == BlockId{0});
  CHECK(store.allocate() == BlockId{1});
  Session s(store);
  auto blk = s.read(BlockId{1});
  CHECK(blk == Block{0, 0, 0, 0});
  CHECK(store.block_count() == 2);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(BlockStore({1, 32}), Error);
  CHECK_THROWS_AS(BlockStore({4, 8}), Error);
  CHECK(SimConfig{8, 32}.block_bits() == 256);
}

TEST_CASE("read and write are each charged once per call") {
  BlockStore store({4, 32});
  auto id = store.allocate();
  Session s(store);
  s.write(id, Block{1, 2, 3, 4});
  CHECK(s.read(id) == Block{1, 2, 3, 4});
  s.read(id);
  CHECK(s.stats().reads == 2);
  CHECK(s.stats().writes == 1);
}

TEST_CASE("invalid ids and overflowing words are rejected") {
  BlockStore store({4, 16});
  store.allocate_extent(3);
  Session s(store);
  CHECK_THROWS_AS(s.read(BlockId{999}), Error);
  try {
    s.write(BlockId{0}, Block{1u << 16, 0, 0, 0});
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::word_overflow);
  }
  CHECK_THROWS_AS(s.write(BlockId{0}, Block{1, 2}), Error);
  CHECK(s.stats().writes == 0);
}

TEST_CASE("scatter read charges one sI/O per call of at most B addresses") {
  BlockStore store({4, 32});
  auto base = store.allocate_extent(8);
  Session s(store);
  for (std::uint64_t b = 0; b < 8; ++b) s.write(base + b, Block{b * 10, b * 10 + 1, b * 10 + 2, b * 10 + 3});
  std::vector<WordAddress> addrs{{base + 7, 3}, {base + 0, 0}, {base + 3, 1}, {base + 5, 2}};
  CHECK(s.scatter_read(addrs) == std::vector<Word>{73, 0, 31, 52});
  CHECK(s.stats().scatter_ios == 1);
  CHECK(s.scatter_read({}).empty());
  CHECK(s.stats().scatter_ios == 1);
  addrs.push_back({base, 1});
  try {
    s.scatter_read(addrs);
    FAIL("expected width error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::scatter_width);
  }
  CHECK(s.stats().reads == 0);
}

TEST_CASE("sessions account independently") {
  BlockStore store({4, 32});
  auto id = store.allocate();
  Session a(store), b(store);
  a.read(id);
  a.read(id);
  b.read(id);
  CHECK(a.stats().reads == 2);
  CHECK(b.stats().reads == 1);
}

TEST_CASE("random operation sequences: roundtrip, exact accounting, determinism") {
  auto run = [](std::uint64_t seed) {
    BlockStore store({8, 32});
    Session s(store);
    SplitMix64 rng(seed);
    std::vector<Block> shadow;
    std::uint64_t reads = 0, writes = 0;
    for (int step = 0; step < 2000; ++step) {
      const auto op = rng.uniform(0, 2);
      if (op == 0 || shadow.empty()) {
        store.allocate();
        shadow.emplace_back(8, 0);
      } else if (op == 1) {
        const auto id = rng.uniform(0, shadow.size() - 1);
        Block blk(8);
        for (auto& w : blk) w = rng.uniform(0, 0xffffffffu);
        s.write(block_id(id), blk);
        shadow[id] = blk;
        ++writes;
      } else {
        const auto id = rng.uniform(0, shadow.size() - 1);
        REQUIRE(s.read(block_id(id)) == shadow[id]);
        ++reads;
      }
    }
    CHECK(s.stats().reads == reads);
    CHECK(s.stats().writes == writes);
    std::ostringstream out;
    store.dump(out);
    return out.str();
  };
  CHECK(run(7) == run(7));
  CHECK(run(7) != run(8));
}

TEST_CASE("dump and load preserve contents") {
  BlockStore store({4, 24});
  auto id = store.allocate_extent(2);
  Session s(store);
  s.write(id, Block{1, 0xabcdef, 3, 0});
  s.write(id + 1, Block{0xffffff, 0, 0, 7});
  std::stringstream buf;
  store.dump(buf);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "EMS1");
  CHECK(bytes.size() == 4 + 24 + 2 * 4 * 3);
  CHECK(static_cast<unsigned char>(bytes[4]) == 4);  // block_words, little endian
  CHECK(static_cast<unsigned char>(bytes[28 + 3]) == 0xab);  // second word, big endian
  BlockStore back = BlockStore::load(buf);
  CHECK(back.config().word_bits == 24);
  CHECK(back.block_count() == 2);
  CHECK(std::vector<Word>(back.peek(id + 1).begin(), back.peek(id + 1).end()) == Block{0xffffff, 0, 0, 7});

  std::istringstream bad("EMS2");
  CHECK_THROWS_AS(BlockStore::load(bad), Error);
}

TEST_CASE("extent reader holds its working set") {
  BlockStore store({4, 32});
  Session s(store);
  std::vector<Word> words(10);
  for (Word i = 0; i < 10; ++i) words[i] = i + 100;
  auto base = write_extent(s, words);
  Session q(store);
  ExtentReader rd(q, base, 1);
  CHECK(rd.at(0) == 100);
  CHECK(rd.at(3) == 103);
  CHECK(q.stats().reads == 1);
  CHECK(rd.at(9) == 109);
  CHECK(rd.at(10) == 0);
  CHECK(q.stats().reads == 2);
  CHECK(rd.at(1) == 101);
  CHECK(q.stats().reads == 3);
}
