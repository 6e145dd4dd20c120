#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "emrr.h"

namespace {

std::string temp_path(const char* name) { return std::string(P_tmpdir) + "/emrr_capi_" + name; }

void write_text(const std::string& path, const char* text) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs(text, f);
  std::fclose(f);
}

std::vector<std::uint64_t> values(const emrr_result* r) {
  std::vector<std::uint64_t> v;
  for (std::size_t i = 0; i < emrr_result_size(r); ++i) v.push_back(emrr_result_value(r, i));
  return v;
}

}  // namespace

TEST_CASE("worked colored example through the C interface, dump and reload") {
  const auto data_path = temp_path("ex.txt");
  const auto store_path = temp_path("ex.ems");
  write_text(data_path, "1 2\n1 5\n2 2\n");
  emrr_dataset* d = nullptr;
  REQUIRE(emrr_dataset_load(EMRR_DATA_COLORED, data_path.c_str(), &d) == EMRR_OK);
  CHECK(emrr_dataset_size(d) == 2);
  CHECK(emrr_dataset_elements(d) == 3);

  emrr_store* s = nullptr;
  REQUIRE(emrr_store_create(8, 32, &s) == EMRR_OK);
  std::uint64_t root = 0;
  emrr_io_stats st{};
  REQUIRE(emrr_build(s, EMRR_COLORED_RANGE, d, nullptr, &root, &st) == EMRR_OK);
  CHECK(root != 0);
  CHECK(st.writes > 0);
  REQUIRE(emrr_manifest_write(s, EMRR_COLORED_RANGE, root, 0) == EMRR_OK);
  REQUIRE(emrr_store_dump(s, store_path.c_str()) == EMRR_OK);
  emrr_store_destroy(s);

  REQUIRE(emrr_store_load(store_path.c_str(), &s) == EMRR_OK);
  emrr_kind kind{};
  std::uint64_t root2 = 0;
  REQUIRE(emrr_manifest_read(s, &kind, &root2, nullptr) == EMRR_OK);
  CHECK(kind == EMRR_COLORED_RANGE);
  CHECK(root2 == root);

  emrr_query_args q{};
  q.a = 2;
  q.b = 2;
  emrr_result* r = nullptr;
  REQUIRE(emrr_query(s, kind, root2, &q, &r, &st) == EMRR_OK);
  CHECK(values(r) == std::vector<std::uint64_t>{2});
  CHECK(st.writes == 0);
  emrr_result* e = nullptr;
  REQUIRE(emrr_oracle(kind, d, &q, &e) == EMRR_OK);
  CHECK(emrr_result_equal(r, e));
  emrr_result_destroy(r);
  emrr_result_destroy(e);

  q.a = 1;
  REQUIRE(emrr_query(s, kind, root2, &q, &r, nullptr) == EMRR_OK);
  CHECK(values(r) == std::vector<std::uint64_t>{2, 5});
  emrr_result_destroy(r);

  q.b = 3;
  CHECK(emrr_query(s, kind, root2, &q, &r, nullptr) == EMRR_E_INVALID_ARGUMENT);
  CHECK(std::string(emrr_last_error()).size() > 0);

  emrr_store_destroy(s);
  emrr_dataset_destroy(d);
  std::remove(data_path.c_str());
  std::remove(store_path.c_str());
}

TEST_CASE("generated datasets agree with the oracle for every structure") {
  struct Case {
    emrr_kind kind;
    emrr_dataset_type type;
    std::size_t size;
  };
  for (const Case c : {Case{EMRR_THREESIDED, EMRR_DATA_POINTS, 600}, Case{EMRR_COLORED_RANGE, EMRR_DATA_COLORED, 300},
                       Case{EMRR_COLORED_PREFIX, EMRR_DATA_CORPUS, 300}, Case{EMRR_TOPK, EMRR_DATA_CORPUS, 300}}) {
    emrr_dataset* d = nullptr;
    REQUIRE(emrr_dataset_generate(c.type, c.size, 100, 6, 7, &d) == EMRR_OK);
    emrr_store* s = nullptr;
    REQUIRE(emrr_store_create(4, 32, &s) == EMRR_OK);
    emrr_build_params p{0, 3, 0};
    std::uint64_t root = 0;
    REQUIRE(emrr_build(s, c.kind, d, &p, &root, nullptr) == EMRR_OK);
    for (std::uint64_t i = 0; i < 200; ++i) {
      emrr_query_args q{};
      q.x1 = 1 + i;
      q.x2 = 1 + i + 3 * i % 97;
      q.y = i * 3;
      q.a = 1 + i;
      q.b = std::min<std::uint64_t>(c.size, 1 + i + i % 13);
      std::string prefix;
      if (c.type == EMRR_DATA_CORPUS) {
        char buf[64];
        std::size_t len = 0;
        REQUIRE(emrr_dataset_string(d, i % c.size, buf, sizeof buf, &len) == EMRR_OK);
        prefix.assign(buf, std::min<std::size_t>(len, i % 4));
      }
      q.prefix = prefix.c_str();
      q.prefix_len = prefix.size();
      q.k = c.kind == EMRR_TOPK ? 3 : 0;
      emrr_result* r = nullptr;
      emrr_result* e = nullptr;
      REQUIRE(emrr_query(s, c.kind, root, &q, &r, nullptr) == EMRR_OK);
      REQUIRE(emrr_oracle(c.kind, d, &q, &e) == EMRR_OK);
      REQUIRE(emrr_result_equal(r, e));
      emrr_result_destroy(r);
      emrr_result_destroy(e);
    }
    emrr_store_destroy(s);
    emrr_dataset_destroy(d);
  }
  CHECK(emrr_checks_fired() == 0);
}

TEST_CASE("three-sided results expose points") {
  const emrr_point pts[] = {{1, 5, 10}, {2, 1, 20}, {3, 3, 30}, {4, 9, 40}};
  emrr_dataset* d = nullptr;
  REQUIRE(emrr_dataset_from_points(pts, 4, &d) == EMRR_OK);
  emrr_store* s = nullptr;
  REQUIRE(emrr_store_create(4, 32, &s) == EMRR_OK);
  std::uint64_t root = 0;
  REQUIRE(emrr_build(s, EMRR_THREESIDED, d, nullptr, &root, nullptr) == EMRR_OK);
  emrr_query_args q{};
  q.x1 = 1;
  q.x2 = 3;
  q.y = 4;
  emrr_result* r = nullptr;
  REQUIRE(emrr_query(s, EMRR_THREESIDED, root, &q, &r, nullptr) == EMRR_OK);
  REQUIRE(emrr_result_size(r) == 2);
  emrr_point p{};
  REQUIRE(emrr_result_point(r, 0, &p) == EMRR_OK);
  CHECK(p.x == 2);
  CHECK(p.payload == 20);
  REQUIRE(emrr_result_point(r, 1, &p) == EMRR_OK);
  CHECK(p.x == 3);
  CHECK(emrr_result_point(r, 2, &p) == EMRR_E_INVALID_ARGUMENT);
  emrr_result_destroy(r);
  emrr_store_destroy(s);
  emrr_dataset_destroy(d);
}

TEST_CASE("errors map to status codes") {
  emrr_store* s = nullptr;
  CHECK(emrr_store_create(0, 32, &s) == EMRR_E_INVALID_ARGUMENT);
  CHECK(emrr_store_load("/nonexistent/emrr.ems", &s) == EMRR_E_IO);
  REQUIRE(emrr_store_create(4, 32, &s) == EMRR_OK);
  CHECK(emrr_manifest_read(s, nullptr, nullptr, nullptr) == EMRR_E_FORMAT);

  emrr_dataset* d = nullptr;
  REQUIRE(emrr_dataset_generate(EMRR_DATA_CORPUS, 10, 5, 4, 1, &d) == EMRR_OK);
  std::uint64_t root = 0;
  CHECK(emrr_build(s, EMRR_THREESIDED, d, nullptr, &root, nullptr) == EMRR_E_INVALID_ARGUMENT);
  CHECK(emrr_build(s, EMRR_TOPK, d, nullptr, &root, nullptr) == EMRR_E_INVALID_ARGUMENT);
  emrr_result* r = nullptr;
  emrr_query_args q{};
  CHECK(emrr_query(s, EMRR_TOPK, 1u << 30, &q, &r, nullptr) == EMRR_E_INVALID_BLOCK);

  const emrr_point far[] = {{1, 1, 0}, {1000, 1, 0}};
  emrr_dataset* sparse = nullptr;
  REQUIRE(emrr_dataset_from_points(far, 2, &sparse) == EMRR_OK);
  CHECK(emrr_build(s, EMRR_THREESIDED, sparse, nullptr, &root, nullptr) == EMRR_E_NOT_RANK_SPACE);

  const auto bad = temp_path("bad.txt");
  write_text(bad, "1 x\n");
  emrr_dataset* b = nullptr;
  CHECK(emrr_dataset_load(EMRR_DATA_COLORED, bad.c_str(), &b) == EMRR_E_FORMAT);
  CHECK(std::string(emrr_last_error()).find("line 1") != std::string::npos);
  std::remove(bad.c_str());
  CHECK(std::string(emrr_status_name(EMRR_E_SCATTER_WIDTH)) == "scatter_width");

  emrr_dataset_destroy(sparse);
  emrr_dataset_destroy(d);
  emrr_store_destroy(s);
}
