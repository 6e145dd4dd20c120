#ifndef EMRR_H
#define EMRR_H

/*
 * C interface to the external-memory range reporting library.
 *
 * Every call returns an emrr_status; on failure emrr_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the caller,
 * who releases them with the matching *_destroy function. Structures live in a
 * store and are named by the block id of their root. Block 0 of a store may
 * hold a manifest recording one structure's kind, root and parameter.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EMRR_API __declspec(dllexport)
#else
#define EMRR_API __attribute__((visibility("default")))
#endif

typedef enum emrr_status {
  EMRR_OK = 0,
  EMRR_E_INVALID_ARGUMENT = 1,
  EMRR_E_INVALID_BLOCK = 2,
  EMRR_E_WORD_OVERFLOW = 3,
  EMRR_E_SCATTER_WIDTH = 4,
  EMRR_E_NOT_RANK_SPACE = 5,
  EMRR_E_CAPACITY = 6,
  EMRR_E_MISALIGNED = 7,
  EMRR_E_FORMAT = 8,
  EMRR_E_IO = 9,
  EMRR_E_INTERNAL = 100
} emrr_status;

typedef enum emrr_kind {
  EMRR_THREESIDED = 1,
  EMRR_COLORED_RANGE = 2,
  EMRR_COLORED_PREFIX = 3,
  EMRR_TOPK = 4
} emrr_kind;

/* Dataset shapes: points for three-sided, sets for colored range, corpus for prefix and top-k. */
typedef enum emrr_dataset_type { EMRR_DATA_POINTS = 1, EMRR_DATA_COLORED = 2, EMRR_DATA_CORPUS = 3 } emrr_dataset_type;

typedef struct emrr_store emrr_store;
typedef struct emrr_dataset emrr_dataset;
typedef struct emrr_result emrr_result;

typedef struct emrr_point {
  uint64_t x;
  uint64_t y;
  uint64_t payload;
} emrr_point;

typedef struct emrr_io_stats {
  uint64_t reads;
  uint64_t writes;
  uint64_t scatter_ios;
} emrr_io_stats;

typedef struct emrr_build_params {
  uint64_t leaf_param; /* three-sided leaf parameter l; 0 = B * ceil(lg^2 n) */
  uint64_t k;          /* top-k parameter; must be >= 1 for EMRR_TOPK */
  int literal_rule;    /* top-k: 1 selects the literal membership rule */
} emrr_build_params;

typedef struct emrr_query_args {
  uint64_t x1, x2, y;     /* three-sided */
  uint64_t a, b;          /* colored range, 1-based set indices */
  const char* prefix;     /* colored prefix and top-k */
  size_t prefix_len;
  uint64_t k;             /* top-k: 0 = build k */
} emrr_query_args;

EMRR_API const char* emrr_last_error(void);
EMRR_API const char* emrr_status_name(emrr_status status);

/* Stores */
EMRR_API emrr_status emrr_store_create(uint32_t block_words, uint32_t word_bits, emrr_store** out);
EMRR_API void emrr_store_destroy(emrr_store* store);
EMRR_API emrr_status emrr_store_dump(const emrr_store* store, const char* path);
EMRR_API emrr_status emrr_store_load(const char* path, emrr_store** out);
EMRR_API emrr_status emrr_store_info(const emrr_store* store, uint32_t* block_words, uint32_t* word_bits,
                                     uint64_t* blocks);

/* Manifest in block 0. emrr_build reserves block 0 on an empty store, so no root is ever 0. */
EMRR_API emrr_status emrr_manifest_reserve(emrr_store* store);
EMRR_API emrr_status emrr_manifest_write(emrr_store* store, emrr_kind kind, uint64_t root, uint64_t param);
EMRR_API emrr_status emrr_manifest_read(const emrr_store* store, emrr_kind* kind, uint64_t* root, uint64_t* param);

/* Datasets */
EMRR_API emrr_status emrr_dataset_load(emrr_dataset_type type, const char* path, emrr_dataset** out);
EMRR_API emrr_status emrr_dataset_save(const emrr_dataset* data, const char* path);
/* size: points n, sets m, corpus strings n. sigma bounds colors; max_len caps set size or string length. */
EMRR_API emrr_status emrr_dataset_generate(emrr_dataset_type type, size_t size, uint64_t sigma, size_t max_len,
                                           uint64_t seed, emrr_dataset** out);
EMRR_API emrr_status emrr_dataset_from_points(const emrr_point* points, size_t n, emrr_dataset** out);
EMRR_API emrr_dataset_type emrr_dataset_kind(const emrr_dataset* data);
/* Points n, sets m, or corpus strings n. */
EMRR_API size_t emrr_dataset_size(const emrr_dataset* data);
/* Total point count after reduction: n, sum of |C_i|, or sum of |c(x)|. */
EMRR_API size_t emrr_dataset_elements(const emrr_dataset* data);
/* Copies the text of string i (0-based, in file order) into buf; *len receives its length. */
EMRR_API emrr_status emrr_dataset_string(const emrr_dataset* data, size_t i, char* buf, size_t cap, size_t* len);
EMRR_API void emrr_dataset_destroy(emrr_dataset* data);

/* Build and query. Stats, when non-null, receive the transfers of that call alone. */
EMRR_API emrr_status emrr_build(emrr_store* store, emrr_kind kind, const emrr_dataset* data,
                                const emrr_build_params* params, uint64_t* root, emrr_io_stats* stats);
EMRR_API emrr_status emrr_query(emrr_store* store, emrr_kind kind, uint64_t root, const emrr_query_args* args,
                                emrr_result** out, emrr_io_stats* stats);
/* Brute-force answer for the same query, for verification. */
EMRR_API emrr_status emrr_oracle(emrr_kind kind, const emrr_dataset* data, const emrr_query_args* args,
                                 emrr_result** out);

/* Results: points for three-sided (sorted by x, y, payload), colors ascending otherwise. */
EMRR_API size_t emrr_result_size(const emrr_result* result);
EMRR_API uint64_t emrr_result_value(const emrr_result* result, size_t i);
EMRR_API emrr_status emrr_result_point(const emrr_result* result, size_t i, emrr_point* out);
EMRR_API int emrr_result_equal(const emrr_result* a, const emrr_result* b);
EMRR_API void emrr_result_destroy(emrr_result* result);

/* Structural check failures counted in this process. */
EMRR_API uint64_t emrr_checks_fired(void);

#ifdef __cplusplus
}
#endif

#endif /* EMRR_H */
