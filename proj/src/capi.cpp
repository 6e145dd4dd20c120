#include "emrr.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <variant>

#include "emrr/checks.hpp"
#include "emrr/colored.hpp"
#include "emrr/dataset_io.hpp"
#include "emrr/oracle.hpp"
#include "emrr/threesided.hpp"
#include "emrr/topk.hpp"

struct emrr_store {
  emrr::BlockStore store;
};

struct emrr_dataset {
  std::variant<std::vector<emrr::Point>, emrr::ColoredDataset, emrr::Corpus> data;
};

struct emrr_result {
  bool points = false;
  std::vector<emrr::Point> pts;
  std::vector<emrr::Word> values;
};

namespace {

using namespace emrr;

// Block 0 layout: [magic, kind, root, param].
constexpr Word kManifestMagic = 0x454d5252;  // "EMRR"
constexpr std::size_t kManifestWords = 4;

thread_local std::string g_last_error;

emrr_status fail(emrr_status s, const char* what) {
  g_last_error = what;
  return s;
}

/// Runs f, translating exceptions into status codes.
template <class F>
emrr_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return EMRR_OK;
  } catch (const Error& e) {
    return fail(static_cast<emrr_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EMRR_E_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return fail(EMRR_E_INTERNAL, e.what());
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw Error(Errc::invalid_argument, what);
}

emrr_io_stats to_c(const IOStats& s) { return {s.reads, s.writes, s.scatter_ios}; }

template <class T>
const T& as(const emrr_dataset* d, const char* what) {
  const T* p = std::get_if<T>(&d->data);
  require(p != nullptr, what);
  return *p;
}

std::string_view prefix_of(const emrr_query_args* a) {
  if (a->prefix == nullptr) return {};
  return {a->prefix, a->prefix_len};
}

emrr_dataset_type type_of(const emrr_dataset* d) {
  return static_cast<emrr_dataset_type>(d->data.index() + 1);
}

}  // namespace

extern "C" {

const char* emrr_last_error(void) { return g_last_error.c_str(); }

const char* emrr_status_name(emrr_status status) {
  switch (status) {
    case EMRR_OK: return "ok";
    case EMRR_E_INVALID_ARGUMENT: return "invalid_argument";
    case EMRR_E_INVALID_BLOCK: return "invalid_block";
    case EMRR_E_WORD_OVERFLOW: return "word_overflow";
    case EMRR_E_SCATTER_WIDTH: return "scatter_width";
    case EMRR_E_NOT_RANK_SPACE: return "not_rank_space";
    case EMRR_E_CAPACITY: return "capacity";
    case EMRR_E_MISALIGNED: return "misaligned";
    case EMRR_E_FORMAT: return "format";
    case EMRR_E_IO: return "io";
    case EMRR_E_INTERNAL: return "internal";
  }
  return "unknown";
}

emrr_status emrr_store_create(uint32_t block_words, uint32_t word_bits, emrr_store** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new emrr_store{BlockStore({block_words, word_bits})};
  });
}

void emrr_store_destroy(emrr_store* store) { delete store; }

emrr_status emrr_store_dump(const emrr_store* store, const char* path) {
  return guarded([&] {
    require(store && path, "null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::io, std::string("cannot open ") + path);
    store->store.dump(f);
    if (!f.flush()) throw Error(Errc::io, std::string("write failed: ") + path);
  });
}

emrr_status emrr_store_load(const char* path, emrr_store** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::io, std::string("cannot open ") + path);
    *out = new emrr_store{BlockStore::load(f)};
  });
}

emrr_status emrr_store_info(const emrr_store* store, uint32_t* block_words, uint32_t* word_bits, uint64_t* blocks) {
  return guarded([&] {
    require(store != nullptr, "null store");
    if (block_words) *block_words = store->store.config().block_words;
    if (word_bits) *word_bits = store->store.config().word_bits;
    if (blocks) *blocks = store->store.block_count();
  });
}

emrr_status emrr_manifest_reserve(emrr_store* store) {
  return guarded([&] {
    require(store != nullptr, "null store");
    require(store->store.block_count() == 0, "manifest must be the first block");
    store->store.allocate();
  });
}

emrr_status emrr_manifest_write(emrr_store* store, emrr_kind kind, uint64_t root, uint64_t param) {
  return guarded([&] {
    require(store != nullptr, "null store");
    require(store->store.block_count() > 0, "no manifest block");
    require(store->store.config().block_words >= kManifestWords, "block too small for a manifest");
    Block b(store->store.config().block_words, 0);
    b[0] = kManifestMagic;
    b[1] = static_cast<Word>(kind);
    b[2] = root;
    b[3] = param;
    for (Word w : b)
      if (w > store->store.config().max_word()) throw Error(Errc::word_overflow, "manifest field exceeds word size");
    Session s(store->store);
    s.write(block_id(0), b);
  });
}

emrr_status emrr_manifest_read(const emrr_store* store, emrr_kind* kind, uint64_t* root, uint64_t* param) {
  return guarded([&] {
    require(store != nullptr, "null store");
    if (store->store.block_count() == 0 || store->store.config().block_words < kManifestWords)
      throw Error(Errc::format, "store has no manifest");
    const auto b = store->store.peek(block_id(0));
    if (b[0] != kManifestMagic || b[1] < EMRR_THREESIDED || b[1] > EMRR_TOPK)
      throw Error(Errc::format, "store has no manifest");
    if (kind) *kind = static_cast<emrr_kind>(b[1]);
    if (root) *root = b[2];
    if (param) *param = b[3];
  });
}

emrr_status emrr_dataset_load(emrr_dataset_type type, const char* path, emrr_dataset** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream f(path);
    if (!f) throw Error(Errc::io, std::string("cannot open ") + path);
    switch (type) {
      case EMRR_DATA_POINTS: *out = new emrr_dataset{read_points(f)}; break;
      case EMRR_DATA_COLORED: *out = new emrr_dataset{read_colored(f)}; break;
      case EMRR_DATA_CORPUS: *out = new emrr_dataset{read_corpus(f)}; break;
      default: require(false, "unknown dataset type");
    }
  });
}

emrr_status emrr_dataset_save(const emrr_dataset* data, const char* path) {
  return guarded([&] {
    require(data && path, "null argument");
    std::ofstream f(path);
    if (!f) throw Error(Errc::io, std::string("cannot open ") + path);
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, std::vector<Point>>)
            write_points(f, d);
          else if constexpr (std::is_same_v<T, ColoredDataset>)
            write_colored(f, d);
          else
            write_corpus(f, d);
        },
        data->data);
    if (!f.flush()) throw Error(Errc::io, std::string("write failed: ") + path);
  });
}

emrr_status emrr_dataset_generate(emrr_dataset_type type, size_t size, uint64_t sigma, size_t max_len, uint64_t seed,
                                  emrr_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    switch (type) {
      case EMRR_DATA_POINTS: *out = new emrr_dataset{generate_points(size, seed)}; break;
      case EMRR_DATA_COLORED: *out = new emrr_dataset{generate_colored(size, sigma, max_len, seed)}; break;
      case EMRR_DATA_CORPUS: *out = new emrr_dataset{generate_corpus(size, max_len, sigma, seed)}; break;
      default: require(false, "unknown dataset type");
    }
  });
}

emrr_status emrr_dataset_from_points(const emrr_point* points, size_t n, emrr_dataset** out) {
  return guarded([&] {
    require(out != nullptr && (points != nullptr || n == 0), "null argument");
    std::vector<Point> v;
    v.reserve(n);
    for (size_t i = 0; i < n; ++i) v.push_back({points[i].x, points[i].y, points[i].payload, 0});
    *out = new emrr_dataset{std::move(v)};
  });
}

emrr_dataset_type emrr_dataset_kind(const emrr_dataset* data) { return type_of(data); }

size_t emrr_dataset_size(const emrr_dataset* data) {
  return std::visit(
      [](const auto& d) -> size_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ColoredDataset>)
          return d.sets.size();
        else
          return d.size();
      },
      data->data);
}

size_t emrr_dataset_elements(const emrr_dataset* data) {
  return std::visit(
      [](const auto& d) -> size_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, std::vector<Point>>) {
          return d.size();
        } else if constexpr (std::is_same_v<T, ColoredDataset>) {
          return d.total();
        } else {
          size_t n = 0;
          for (const auto& e : d) n += e.colors.size();
          return n;
        }
      },
      data->data);
}

emrr_status emrr_dataset_string(const emrr_dataset* data, size_t i, char* buf, size_t cap, size_t* len) {
  return guarded([&] {
    require(data != nullptr, "null dataset");
    const auto& c = as<Corpus>(data, "dataset is not a corpus");
    require(i < c.size(), "string index out of range");
    const std::string& t = c[i].text;
    if (len) *len = t.size();
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, t.size());
      t.copy(buf, n);
      buf[n] = '\0';
    }
  });
}

void emrr_dataset_destroy(emrr_dataset* data) { delete data; }

emrr_status emrr_build(emrr_store* store, emrr_kind kind, const emrr_dataset* data, const emrr_build_params* params,
                       uint64_t* root, emrr_io_stats* stats) {
  return guarded([&] {
    require(store && data && root, "null argument");
    const emrr_build_params p = params ? *params : emrr_build_params{0, 0, 0};
    // Keep block 0 free for the manifest.
    if (store->store.block_count() == 0) store->store.allocate();
    Session s(store->store);
    TopConfig top;
    top.leaf_param = p.leaf_param;
    BlockId r{};
    switch (kind) {
      case EMRR_THREESIDED:
        r = ThreeSided::build(s, as<std::vector<Point>>(data, "three-sided needs points"), top).root;
        break;
      case EMRR_COLORED_RANGE:
        r = ColoredRange::build(s, as<ColoredDataset>(data, "colored range needs colored sets"), top);
        break;
      case EMRR_COLORED_PREFIX:
        r = ColoredPrefix::build(s, as<Corpus>(data, "colored prefix needs a corpus"), top);
        break;
      case EMRR_TOPK:
        r = TopkIndex::build(s, as<Corpus>(data, "top-k needs a corpus"), p.k,
                             p.literal_rule ? MembershipRule::literal : MembershipRule::gather_cost)
                .root;
        break;
      default: require(false, "unknown structure kind");
    }
    *root = to_word(r);
    if (stats) *stats = to_c(s.stats());
  });
}

emrr_status emrr_query(emrr_store* store, emrr_kind kind, uint64_t root, const emrr_query_args* args,
                       emrr_result** out, emrr_io_stats* stats) {
  return guarded([&] {
    require(store && args && out, "null argument");
    Session s(store->store);
    auto r = std::make_unique<emrr_result>();
    const BlockId id = block_id(root);
    if (!store->store.valid(id)) throw Error(Errc::invalid_block, "root is not a block of this store");
    switch (kind) {
      case EMRR_THREESIDED:
        r->points = true;
        r->pts = normalized(ThreeSided::query(s, id, args->x1, args->x2, args->y));
        break;
      case EMRR_COLORED_RANGE: r->values = ColoredRange::query(s, id, args->a, args->b); break;
      case EMRR_COLORED_PREFIX: r->values = ColoredPrefix::query(s, id, prefix_of(args)); break;
      case EMRR_TOPK: r->values = TopkIndex::query(s, id, prefix_of(args), args->k); break;
      default: require(false, "unknown structure kind");
    }
    *out = r.release();
    if (stats) *stats = to_c(s.stats());
  });
}

emrr_status emrr_oracle(emrr_kind kind, const emrr_dataset* data, const emrr_query_args* args, emrr_result** out) {
  return guarded([&] {
    require(data && args && out, "null argument");
    auto r = std::make_unique<emrr_result>();
    switch (kind) {
      case EMRR_THREESIDED:
        r->points = true;
        r->pts = normalized(oracle::brute_threesided(as<std::vector<Point>>(data, "three-sided needs points"),
                                                     {args->x1, args->x2, args->y}));
        break;
      case EMRR_COLORED_RANGE: {
        const auto& d = as<ColoredDataset>(data, "colored range needs colored sets");
        require(args->a > args->b || (args->a >= 1 && args->b <= d.sets.size()), "set index out of range");
        r->values = oracle::brute_colored(d, args->a, args->b);
        break;
      }
      case EMRR_COLORED_PREFIX:
        r->values = oracle::brute_prefix(as<Corpus>(data, "colored prefix needs a corpus"), prefix_of(args));
        break;
      case EMRR_TOPK:
        require(args->k > 0, "oracle top-k needs an explicit k");
        r->values = oracle::brute_topk(as<Corpus>(data, "top-k needs a corpus"), prefix_of(args), args->k);
        break;
      default: require(false, "unknown structure kind");
    }
    *out = r.release();
  });
}

size_t emrr_result_size(const emrr_result* result) {
  return result->points ? result->pts.size() : result->values.size();
}

uint64_t emrr_result_value(const emrr_result* result, size_t i) {
  if (result->points) return i < result->pts.size() ? result->pts[i].payload : 0;
  return i < result->values.size() ? result->values[i] : 0;
}

emrr_status emrr_result_point(const emrr_result* result, size_t i, emrr_point* out) {
  return guarded([&] {
    require(result && out, "null argument");
    require(result->points, "result holds colors, not points");
    require(i < result->pts.size(), "index out of range");
    const Point& p = result->pts[i];
    *out = {p.x, p.y, p.payload};
  });
}

int emrr_result_equal(const emrr_result* a, const emrr_result* b) {
  return a->points == b->points && a->pts == b->pts && a->values == b->values;
}

void emrr_result_destroy(emrr_result* result) { delete result; }

uint64_t emrr_checks_fired(void) { return checks::fired_total(); }

}  // extern "C"
