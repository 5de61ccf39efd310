#ifndef DPCHAR_H
#define DPCHAR_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum DpcStatus {
  DPC_STATUS_OK = 0,
  DPC_STATUS_NULL_POINTER = 1,
  DPC_STATUS_INVALID_ARGUMENT = 2,
  DPC_STATUS_IO = 3,
  DPC_STATUS_DATA = 4,
  DPC_STATUS_CONFIG = 5,
  DPC_STATUS_INTERNAL = 6,
  DPC_STATUS_OUT_OF_RANGE = 7,
} DpcStatus;

/**
 * Input formats; pass the numeric value where a `format` is expected.
 */
typedef enum DpcFormat {
  DPC_FORMAT_TRANSACTION_LIST = 0,
  DPC_FORMAT_MATRIX_CSV = 1,
} DpcFormat;

/**
 * Opaque analysis handle.
 */
typedef struct DpcAnalysis DpcAnalysis;

/**
 * Opaque dataset handle.
 */
typedef struct DpcDataset DpcDataset;

/**
 * Analysis parameters. Obtain defaults from [`dpc_config_default`].
 */
typedef struct DpcConfig {
  double minsup;
  size_t max_pattern_size;
  double delta;
  double j;
  double epsilon;
  size_t max_synergy_size;
  /**
   * 0 disables FDR estimation.
   */
  size_t permutations;
  uint64_t seed;
} DpcConfig;

/**
 * One characterized pattern. Absent values are NaN.
 */
typedef struct DpcPatternRecord {
  size_t size;
  size_t count_pos;
  size_t count_neg;
  double mi;
  double subset_mi_max;
  double improvement;
  double incoherence;
  double best_aggregated_mi;
  double synergy;
  /**
   * +1 positive class, -1 negative class, 0 tied.
   */
  int32_t direction;
  bool t1;
  bool t2;
  bool t3;
  bool t4;
  bool gray;
  double fdr;
} DpcPatternRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *dpc_last_error(void);

struct DpcConfig dpc_config_default(void);

/**
 * Loads a dataset file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DpcStatus dpc_dataset_load(const char *path, uint32_t format, struct DpcDataset **out);

/**
 * Parses a dataset from in-memory text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DpcStatus dpc_dataset_parse(const char *text, uint32_t format, struct DpcDataset **out);

/**
 * The planted four-pattern fixture, each row repeated `replicate` times.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DpcStatus dpc_dataset_fixture(size_t replicate, struct DpcDataset **out);

/**
 * # Safety
 * `ds` must be NULL or a handle from a `dpc_dataset_*` constructor, not yet freed.
 */
void dpc_dataset_free(struct DpcDataset *ds);

/**
 * # Safety
 * `ds` must be a live dataset handle or NULL.
 */
size_t dpc_dataset_num_rows(const struct DpcDataset *ds);

/**
 * # Safety
 * `ds` must be a live dataset handle or NULL.
 */
size_t dpc_dataset_num_items(const struct DpcDataset *ds);

/**
 * # Safety
 * `ds` must be a live dataset handle; `n_pos` and `n_neg` valid pointers.
 */
enum DpcStatus dpc_dataset_class_counts(const struct DpcDataset *ds, size_t *n_pos, size_t *n_neg);

/**
 * Name of item `index`, owned by the dataset handle. NULL when out of range.
 *
 * # Safety
 * `ds` must be a live dataset handle or NULL.
 */
const char *dpc_dataset_item_name(const struct DpcDataset *ds, size_t index);

/**
 * `(countPos, countNeg)` of the rows containing every listed item.
 *
 * # Safety
 * `ds` must be live; `items` must point to `len` indices (may be NULL when
 * `len` is 0); outputs must be valid.
 */
enum DpcStatus dpc_dataset_support_counts(const struct DpcDataset *ds,
                                          const size_t *items,
                                          size_t len,
                                          size_t *count_pos,
                                          size_t *count_neg);

/**
 * Normalized mutual information of a pattern from its counts.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DpcStatus dpc_mutual_information(size_t count_pos,
                                      size_t count_neg,
                                      size_t n_pos,
                                      size_t n_neg,
                                      double *out);

/**
 * Mines, characterizes and (when `permutations > 0`) FDR-tests a dataset.
 *
 * # Safety
 * `ds` must be live, `config` NULL (defaults) or valid, `out` valid.
 */
enum DpcStatus dpc_analyze(const struct DpcDataset *ds,
                           const struct DpcConfig *config,
                           struct DpcAnalysis **out);

/**
 * # Safety
 * `an` must be NULL or a handle from [`dpc_analyze`], not yet freed.
 */
void dpc_analysis_free(struct DpcAnalysis *an);

/**
 * Number of closed frequent patterns mined.
 *
 * # Safety
 * `an` must be a live analysis handle or NULL.
 */
size_t dpc_analysis_closed_count(const struct DpcAnalysis *an);

/**
 * Number of discriminative (characterized) patterns.
 *
 * # Safety
 * `an` must be a live analysis handle or NULL.
 */
size_t dpc_analysis_len(const struct DpcAnalysis *an);

/**
 * Measures and labels of discriminative pattern `index`.
 *
 * # Safety
 * `an` must be live and `out` valid.
 */
enum DpcStatus dpc_analysis_pattern(const struct DpcAnalysis *an,
                                    size_t index,
                                    struct DpcPatternRecord *out);

/**
 * Copies the item indices of discriminative pattern `index` into `buf`.
 * `*len` receives the pattern size even when `cap` is too small, in which
 * case nothing is copied and `OutOfRange` is returned.
 *
 * # Safety
 * `an` must be live, `buf` must hold `cap` entries (may be NULL if `cap`
 * is 0), `len` must be valid.
 */
enum DpcStatus dpc_analysis_pattern_items(const struct DpcAnalysis *an,
                                          size_t index,
                                          size_t *buf,
                                          size_t cap,
                                          size_t *len);

/**
 * Runs the full pipeline on a file and writes the report files into `out_dir`.
 *
 * # Safety
 * `input` and `out_dir` must be NUL-terminated strings; `config` NULL or valid.
 */
enum DpcStatus dpc_run(const char *input,
                       uint32_t format,
                       const struct DpcConfig *config,
                       const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DPCHAR_H */
