// Command-line front end over the C interface.
//
//   emrr gen {points|colored|corpus} SIZE [--seed S] [--sigma C] [--max-len L] --out FILE
//   emrr build --structure KIND --data FILE [--block-words B] [--word-bits W] [--k K] --out STORE
//   emrr query --store STORE [--x1 --x2 --y | --a --b | --prefix P] [--k K] [--verify DATA]
//   emrr bench --structure KIND [--sweep-n N,...] [--data FILE] [--queries Q] [--seed S] ...
//
// Exit status: 0 ok, 1 answer mismatch under --verify, 2 usage or input error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emrr.h"
#include "emrr/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct Failure {
  std::string message;
};

void check(emrr_status s, const std::string& what) {
  if (s != EMRR_OK) throw Failure{what + ": " + emrr_status_name(s) + ": " + emrr_last_error()};
}

struct StoreDel {
  void operator()(emrr_store* p) const { emrr_store_destroy(p); }
};
struct DataDel {
  void operator()(emrr_dataset* p) const { emrr_dataset_destroy(p); }
};
struct ResultDel {
  void operator()(emrr_result* p) const { emrr_result_destroy(p); }
};
using StorePtr = std::unique_ptr<emrr_store, StoreDel>;
using DataPtr = std::unique_ptr<emrr_dataset, DataDel>;
using ResultPtr = std::unique_ptr<emrr_result, ResultDel>;

const std::map<std::string, emrr_kind> kKinds{{"threesided", EMRR_THREESIDED},
                                              {"colored-range", EMRR_COLORED_RANGE},
                                              {"colored-prefix", EMRR_COLORED_PREFIX},
                                              {"topk", EMRR_TOPK}};

const std::map<std::string, emrr_dataset_type> kDataKinds{
    {"points", EMRR_DATA_POINTS}, {"colored", EMRR_DATA_COLORED}, {"corpus", EMRR_DATA_CORPUS}};

std::string kind_name(emrr_kind k) {
  for (const auto& [name, v] : kKinds)
    if (v == k) return name;
  return "unknown";
}

emrr_dataset_type data_type_for(emrr_kind k) {
  switch (k) {
    case EMRR_THREESIDED: return EMRR_DATA_POINTS;
    case EMRR_COLORED_RANGE: return EMRR_DATA_COLORED;
    default: return EMRR_DATA_CORPUS;
  }
}

DataPtr load_data(emrr_dataset_type t, const std::string& path) {
  emrr_dataset* d = nullptr;
  check(emrr_dataset_load(t, path.c_str(), &d), "loading " + path);
  return DataPtr(d);
}

std::string corpus_string(const emrr_dataset* d, std::size_t i) {
  std::size_t len = 0;
  check(emrr_dataset_string(d, i, nullptr, 0, &len), "reading corpus");
  std::string s(len + 1, '\0');
  check(emrr_dataset_string(d, i, s.data(), s.size(), &len), "reading corpus");
  s.resize(len);
  return s;
}

void print_result(std::ostream& out, emrr_kind kind, const emrr_result* r) {
  for (std::size_t i = 0; i < emrr_result_size(r); ++i) {
    if (kind == EMRR_THREESIDED) {
      emrr_point p;
      check(emrr_result_point(r, i, &p), "reading result");
      out << p.x << ' ' << p.y << ' ' << p.payload << '\n';
    } else {
      out << emrr_result_value(r, i) << '\n';
    }
  }
}

// ---- gen ----

struct GenOpts {
  std::string kind;
  std::size_t size = 0;
  std::uint64_t seed = 1;
  std::uint64_t sigma = 0;
  std::size_t max_len = 0;
  std::string out;
};

int cmd_gen(const GenOpts& o) {
  const auto t = kDataKinds.at(o.kind);
  const std::uint64_t sigma = o.sigma ? o.sigma : std::max<std::uint64_t>(1, o.size);
  const std::size_t max_len = o.max_len ? o.max_len : (t == EMRR_DATA_COLORED ? 4 : 12);
  emrr_dataset* d = nullptr;
  check(emrr_dataset_generate(t, o.size, sigma, max_len, o.seed, &d), "generating");
  DataPtr data(d);
  check(emrr_dataset_save(data.get(), o.out.c_str()), "writing " + o.out);
  return kExitOk;
}

// ---- build ----

struct StoreOpts {
  std::uint32_t block_words = 8;
  std::uint32_t word_bits = 32;
  std::uint64_t k = 0;
};

struct BuildOpts {
  std::string structure;
  std::string data;
  std::string out;
  StoreOpts store;
};

int cmd_build(const BuildOpts& o) {
  const emrr_kind kind = kKinds.at(o.structure);
  auto data = load_data(data_type_for(kind), o.data);
  emrr_store* s = nullptr;
  check(emrr_store_create(o.store.block_words, o.store.word_bits, &s), "creating store");
  StorePtr store(s);
  emrr_build_params p{0, o.store.k, 0};
  std::uint64_t root = 0;
  emrr_io_stats st{};
  check(emrr_build(store.get(), kind, data.get(), &p, &root, &st), "building");
  check(emrr_manifest_write(store.get(), kind, root, o.store.k), "writing manifest");
  check(emrr_store_dump(store.get(), o.out.c_str()), "writing " + o.out);
  std::uint64_t blocks = 0;
  check(emrr_store_info(store.get(), nullptr, nullptr, &blocks), "store info");
  std::cerr << kind_name(kind) << ": root " << root << ", " << blocks << " blocks, " << st.writes << " writes\n";
  return kExitOk;
}

// ---- query ----

struct QueryOpts {
  std::string store;
  std::uint64_t x1 = 0, x2 = 0, y = 0, a = 0, b = 0, k = 0;
  std::string prefix;
  std::string verify;
  bool stats = false;
};

int cmd_query(const QueryOpts& o) {
  emrr_store* s = nullptr;
  check(emrr_store_load(o.store.c_str(), &s), "loading " + o.store);
  StorePtr store(s);
  emrr_kind kind;
  std::uint64_t root = 0, param = 0;
  check(emrr_manifest_read(store.get(), &kind, &root, &param), "reading manifest");
  emrr_query_args args{o.x1, o.x2, o.y, o.a, o.b, o.prefix.c_str(), o.prefix.size(), o.k};
  emrr_result* r = nullptr;
  emrr_io_stats st{};
  check(emrr_query(store.get(), kind, root, &args, &r, &st), "querying");
  ResultPtr result(r);
  print_result(std::cout, kind, result.get());
  if (o.stats)
    std::cerr << "reads " << st.reads << " writes " << st.writes << " sios " << st.scatter_ios << '\n';
  if (o.verify.empty()) return kExitOk;
  auto data = load_data(data_type_for(kind), o.verify);
  if (kind == EMRR_TOPK && args.k == 0) args.k = param;
  emrr_result* e = nullptr;
  check(emrr_oracle(kind, data.get(), &args, &e), "oracle");
  ResultPtr expected(e);
  if (emrr_result_equal(result.get(), expected.get())) return kExitOk;
  std::cerr << "mismatch: oracle reports " << emrr_result_size(expected.get()) << " items\n";
  return kExitMismatch;
}

// ---- bench ----

struct BenchOpts {
  std::string structure;
  std::string data;
  std::vector<std::size_t> sweep_n;
  std::size_t queries = 1000;
  std::uint64_t seed = 1;
  bool verify = false;
  std::string out;
  StoreOpts store;
};

/// Query mix: a third empty-leaning, the rest spread over output sizes.
emrr_query_args random_query(emrr::SplitMix64& rng, emrr_kind kind, const emrr_dataset* d, std::uint64_t k,
                             std::string& prefix_buf) {
  emrr_query_args q{};
  q.k = k;
  const std::size_t size = emrr_dataset_size(d);
  switch (kind) {
    case EMRR_THREESIDED: {
      const std::uint64_t n = std::max<std::size_t>(size, 1);
      q.x1 = rng.uniform(1, n);
      q.x2 = std::min<std::uint64_t>(n, q.x1 + rng.uniform(0, n / 4));
      const double u = static_cast<double>(rng.uniform(0, 1u << 20)) / (1u << 20);
      q.y = rng.uniform(0, 2) == 0 ? rng.uniform(0, 2) : static_cast<std::uint64_t>(u * u * u * n);
      break;
    }
    case EMRR_COLORED_RANGE: {
      const std::uint64_t m = std::max<std::size_t>(size, 1);
      q.a = rng.uniform(1, m);
      q.b = std::min<std::uint64_t>(m, q.a + rng.uniform(0, 16));
      if (size == 0) q.a = 2, q.b = 1;
      break;
    }
    default: {
      prefix_buf.clear();
      if (size > 0) {
        const std::string s = corpus_string(d, rng.uniform(0, size - 1));
        prefix_buf = s.substr(0, rng.uniform(0, s.size()));
        if (rng.uniform(0, 2) == 0) prefix_buf.push_back(static_cast<char>('a' + rng.uniform(0, 25)));
      }
      q.prefix = prefix_buf.c_str();
      q.prefix_len = prefix_buf.size();
      break;
    }
  }
  return q;
}

DataPtr bench_dataset(emrr_kind kind, std::size_t n, std::uint64_t seed) {
  emrr_dataset* d = nullptr;
  switch (kind) {
    case EMRR_THREESIDED: check(emrr_dataset_generate(EMRR_DATA_POINTS, n, 0, 0, seed, &d), "generating"); break;
    // About n reduced points: sets of average size 2.
    case EMRR_COLORED_RANGE:
      check(emrr_dataset_generate(EMRR_DATA_COLORED, n / 2, std::max<std::size_t>(n, 1), 4, seed, &d), "generating");
      break;
    default:
      check(emrr_dataset_generate(EMRR_DATA_CORPUS, n, std::max<std::size_t>(n, 1), 12, seed, &d), "generating");
  }
  return DataPtr(d);
}

int cmd_bench(const BenchOpts& o) {
  const emrr_kind kind = kKinds.at(o.structure);
  if (kind == EMRR_TOPK && o.store.k == 0) throw Failure{"topk needs --k"};
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw Failure{"cannot open " + o.out};
  }
  std::ostream& out = o.out.empty() ? std::cout : file;
  out << "structure,n,B,w,k,reads,writes,sios,micros\n";
  if (o.queries == 0) return kExitOk;

  std::vector<std::pair<std::size_t, DataPtr>> inputs;
  if (!o.data.empty()) {
    auto d = load_data(data_type_for(kind), o.data);
    inputs.emplace_back(emrr_dataset_elements(d.get()), std::move(d));
  } else {
    const auto sizes = o.sweep_n.empty() ? std::vector<std::size_t>{1024} : o.sweep_n;
    for (std::size_t n : sizes) {
      auto d = bench_dataset(kind, n, o.seed);
      inputs.emplace_back(emrr_dataset_elements(d.get()), std::move(d));
    }
  }

  int status = kExitOk;
  for (const auto& [n, data] : inputs) {
    emrr_store* s = nullptr;
    check(emrr_store_create(o.store.block_words, o.store.word_bits, &s), "creating store");
    StorePtr store(s);
    emrr_build_params p{0, o.store.k, 0};
    std::uint64_t root = 0;
    check(emrr_build(store.get(), kind, data.get(), &p, &root, nullptr), "building");
    emrr::SplitMix64 rng(o.seed ^ (0x9e3779b97f4a7c15ULL * (n + 1)));
    std::string prefix;
    for (std::size_t i = 0; i < o.queries; ++i) {
      const auto q = random_query(rng, kind, data.get(), o.store.k, prefix);
      emrr_result* r = nullptr;
      emrr_io_stats st{};
      const auto t0 = std::chrono::steady_clock::now();
      check(emrr_query(store.get(), kind, root, &q, &r, &st), "querying");
      const auto t1 = std::chrono::steady_clock::now();
      ResultPtr result(r);
      out << o.structure << ',' << n << ',' << o.store.block_words << ',' << o.store.word_bits << ','
          << emrr_result_size(r) << ',' << st.reads << ',' << st.writes << ',' << st.scatter_ios << ','
          << std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() << '\n';
      if (o.verify) {
        emrr_result* e = nullptr;
        check(emrr_oracle(kind, data.get(), &q, &e), "oracle");
        ResultPtr expected(e);
        if (!emrr_result_equal(r, e)) status = kExitMismatch;
      }
    }
  }
  if (status != kExitOk) std::cerr << "mismatch against the oracle\n";
  return status;
}

void add_store_opts(CLI::App* cmd, StoreOpts& s) {
  cmd->add_option("--block-words", s.block_words, "words per block (B)")->check(CLI::Range(2u, 1u << 16));
  cmd->add_option("--word-bits", s.word_bits, "bits per word (w)")->check(CLI::Range(8u, 64u));
  cmd->add_option("--k", s.k, "top-k parameter");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"External-memory range reporting: generate, build, query, bench"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* g = app.add_subcommand("gen", "write a seeded random dataset");
  g->add_option("kind", gen.kind, "points, colored or corpus")->required()->check(CLI::IsMember({"points", "colored", "corpus"}));
  g->add_option("size", gen.size, "points, sets or strings")->required();
  g->add_option("--seed", gen.seed, "PRNG seed");
  g->add_option("--sigma", gen.sigma, "largest color (default: size)");
  g->add_option("--max-len", gen.max_len, "largest set size or string length");
  g->add_option("--out", gen.out, "output file")->required();

  BuildOpts build;
  auto* b = app.add_subcommand("build", "build a structure and write a store dump with its manifest");
  b->add_option("--structure", build.structure)->required()->check(CLI::IsMember({"threesided", "colored-range", "colored-prefix", "topk"}));
  b->add_option("--data", build.data, "dataset file")->required()->check(CLI::ExistingFile);
  b->add_option("--out", build.out, "store dump")->required();
  add_store_opts(b, build.store);

  QueryOpts query;
  auto* q = app.add_subcommand("query", "answer one query against a store dump");
  q->add_option("--store", query.store, "store dump")->required()->check(CLI::ExistingFile);
  q->add_option("--x1", query.x1);
  q->add_option("--x2", query.x2);
  q->add_option("--y", query.y);
  q->add_option("--a", query.a, "first set, 1-based");
  q->add_option("--b", query.b, "last set, 1-based");
  q->add_option("--prefix", query.prefix);
  q->add_option("--k", query.k, "top-k: report at most this many (default: build k)");
  q->add_option("--verify", query.verify, "dataset to check the answer against")->check(CLI::ExistingFile);
  q->add_flag("--stats", query.stats, "print transfer counts to stderr");

  BenchOpts bench;
  auto* be = app.add_subcommand("bench", "time random queries and emit CSV");
  be->add_option("--structure", bench.structure)->required()->check(CLI::IsMember({"threesided", "colored-range", "colored-prefix", "topk"}));
  be->add_option("--data", bench.data, "dataset file instead of generated inputs")->check(CLI::ExistingFile);
  be->add_option("--sweep-n", bench.sweep_n, "input sizes to generate")->delimiter(',');
  be->add_option("--queries", bench.queries, "queries per input");
  be->add_option("--seed", bench.seed, "PRNG seed");
  be->add_flag("--verify", bench.verify, "compare every answer with the oracle");
  be->add_option("--out", bench.out, "CSV file (default: stdout)");
  add_store_opts(be, bench.store);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*b) return cmd_build(build);
    if (*q) return cmd_query(query);
    return cmd_bench(bench);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return kExitUsage;
  }
}
