/* C API for the fuzzygeno two-pass classifier library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return fg_status; on failure fg_error_message() describes the
 * problem for the calling thread. Returned strings are owned by the handle
 * they came from and stay valid until that handle is freed.
 */
#ifndef FUZZYGENO_CAPI_H
#define FUZZYGENO_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fg_status {
    FG_OK = 0,
    FG_ERR_USAGE = 1, /* bad arguments / configuration */
    FG_ERR_DATA = 2,  /* dataset or image problems */
    FG_ERR_MODEL = 3  /* model file / serialization problems */
} fg_status;

typedef struct fg_dataset fg_dataset;
typedef struct fg_model fg_model;

/* A report is an ordered list of named text artifacts (summaries, TSV
 * matrices, PGM payloads). Keys ending in ".pgm" hold binary PGM bytes. */
typedef struct fg_report fg_report;

typedef struct fg_train_options {
    int population_size;
    int max_generations;
    int stall_generations;
    int tournament_size;
    double crossover_prob;
    double mutation_prob;
    int elite_count;
    int min_cuts;
    int max_cuts;
    uint64_t seed;
    int ramp_half_width;
    int pair_threshold;
    double region_threshold;
    const char* groups_file; /* optional path; NULL for confusion-driven discovery */
} fg_train_options;

/* Fills in the library defaults. */
void fg_train_options_init(fg_train_options* opts);

const char* fg_version(void);

/* Last error message for the calling thread; empty string when none. */
const char* fg_error_message(void);

/* Dataset loading. Directory mode: path is a directory with one decimal-named
 * subdirectory of PGM files per class. IDX mode: path is the image file and
 * labels_path the label file. labels_path == NULL selects directory mode. */
fg_status fg_dataset_load(const char* path, const char* labels_path, int invert,
                          fg_dataset** out);
void fg_dataset_free(fg_dataset* ds);
int fg_dataset_size(const fg_dataset* ds);
int fg_dataset_class_count(const fg_dataset* ds);

/* Two-pass training. On success *out_model holds the trained model and, when
 * out_report is non-NULL, *out_report holds the confusion matrices, evolution
 * traces, group listing and a summary. */
fg_status fg_train(const fg_dataset* ds, const fg_train_options* opts, fg_model** out_model,
                   fg_report** out_report);

fg_status fg_model_save(const fg_model* model, const char* path);
fg_status fg_model_load(const char* path, fg_model** out);
void fg_model_free(fg_model* model);

/* Resubstitution-style evaluation of a model against a dataset. */
fg_status fg_evaluate(const fg_model* model, const fg_dataset* ds, fg_report** out);

/* Classify a single PGM image. With trace != 0 the report additionally
 * carries the per-cell feature values. */
fg_status fg_classify_file(const fg_model* model, const char* image_path, int invert, int trace,
                           fg_report** out);

/* Per-class overlap images of a dataset as PGM artifacts. */
fg_status fg_inspect_overlaps(const fg_dataset* ds, fg_report** out);

/* Chromosome text dumps plus partition-line PGMs for a model. */
fg_status fg_inspect_partitions(const fg_model* model, fg_report** out);

int fg_report_count(const fg_report* report);
const char* fg_report_key(const fg_report* report, int index);
/* Value bytes for a key; NULL when absent. size_out (optional) receives the
 * byte length, needed for binary PGM entries. */
const char* fg_report_get(const fg_report* report, const char* key, int* size_out);
void fg_report_free(fg_report* report);

#ifdef __cplusplus
}
#endif

#endif /* FUZZYGENO_CAPI_H */
