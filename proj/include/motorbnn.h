/*
 * motorbnn - electric-motor fault detection from sound recordings with a
 * Bayesian neural network.
 *
 * C API of the shared library. All functions returning int yield MBNN_OK on
 * success or an mbnn_status error code; mbnn_last_error() describes the most
 * recent failure on the calling thread. Handles are opaque and must be
 * released with their matching _free function.
 */
#ifndef MOTORBNN_H
#define MOTORBNN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MBNN_API __declspec(dllexport)
#else
#define MBNN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mbnn_status {
    MBNN_OK = 0,
    MBNN_ERR_IO = 1,          /* file missing or unreadable */
    MBNN_ERR_FORMAT = 2,      /* malformed WAV, manifest, config or snapshot */
    MBNN_ERR_UNSUPPORTED = 3, /* recognizable but unsupported encoding */
    MBNN_ERR_EMPTY = 4,       /* empty signal or empty frequency band */
    MBNN_ERR_SHAPE = 5,       /* dimension mismatch */
    MBNN_ERR_DIVERGENCE = 6,  /* sampler or optimizer diverged */
    MBNN_ERR_INVALID_ARG = 7, /* null handle or out-of-range argument */
    MBNN_ERR_INTERNAL = 8
} mbnn_status;

MBNN_API const char* mbnn_status_name(int status);

/* Message for the last failure on this thread; empty string if none. */
MBNN_API const char* mbnn_last_error(void);

MBNN_API const char* mbnn_version(void);

/* Frees strings returned through char** out-parameters. */
MBNN_API void mbnn_string_free(char* text);

/* ---- configuration ----------------------------------------------------- */

typedef struct mbnn_config mbnn_config;

MBNN_API int mbnn_config_default(mbnn_config** out);
MBNN_API int mbnn_config_load(const char* path, mbnn_config** out);
MBNN_API int mbnn_config_parse(const char* json_text, mbnn_config** out);

/* Sets one scalar by dotted path, e.g. ("experiment.trials", "20"). */
MBNN_API int mbnn_config_set(mbnn_config* cfg, const char* dotted_key, const char* value);

/* Serializes the effective configuration; free with mbnn_string_free. */
MBNN_API int mbnn_config_dump(const mbnn_config* cfg, char** json_out);

MBNN_API void mbnn_config_free(mbnn_config* cfg);

/* ---- signals ------------------------------------------------------------ */

typedef struct mbnn_signal mbnn_signal;

MBNN_API int mbnn_signal_load_wav(const char* path, mbnn_signal** out);
MBNN_API size_t mbnn_signal_sample_count(const mbnn_signal* signal);
MBNN_API uint32_t mbnn_signal_sample_rate(const mbnn_signal* signal);
MBNN_API void mbnn_signal_free(mbnn_signal* signal);

/* ---- trained snapshots and classification ------------------------------ */

typedef struct mbnn_snapshot mbnn_snapshot;

MBNN_API int mbnn_snapshot_load(const char* path, mbnn_snapshot** out);
MBNN_API size_t mbnn_snapshot_feature_count(const mbnn_snapshot* snapshot);
MBNN_API void mbnn_snapshot_free(mbnn_snapshot* snapshot);

typedef struct mbnn_prediction {
    int label;     /* 0 healthy, 1 faulty */
    double mean;   /* posterior-predictive mean */
    double stddev; /* posterior-predictive standard deviation */
} mbnn_prediction;

/*
 * Classifies every analysis window of the signal. Up to `capacity` per-segment
 * predictions are written to `segments`; `*n_segments` receives the total
 * count. `record` (optional) receives the majority-vote verdict, a tie
 * counting as faulty.
 */
MBNN_API int mbnn_classify(const mbnn_snapshot* snapshot, const mbnn_signal* signal,
                           mbnn_prediction* segments, size_t capacity, size_t* n_segments,
                           mbnn_prediction* record);

/* ---- pipeline commands -------------------------------------------------- */

/* Feature CSV (`source_id,segment,class,label,f1..fn`) for a manifest. */
MBNN_API int mbnn_run_features(const mbnn_config* cfg, const char* manifest_path,
                               const char* out_csv);

/*
 * One train/test split + posterior inference; writes the model snapshot to
 * out_snapshot and, when out_report is non-NULL, a rendered trial report.
 * Passing a NULL manifest trains on the built-in synthetic dataset.
 */
MBNN_API int mbnn_run_train(const mbnn_config* cfg, const char* manifest_path,
                            const char* out_snapshot, const char* out_report);

/*
 * Repeated-split evaluation protocol; writes results.csv, summary.json,
 * table1.txt, confusion_<trial>.txt and hist_<class>.csv into out_dir.
 * Passing a NULL manifest evaluates the built-in synthetic dataset.
 */
MBNN_API int mbnn_run_experiment(const mbnn_config* cfg, const char* manifest_path,
                                 const char* out_dir);

/* Writes synthetic WAV files plus manifest.txt into out_dir. */
MBNN_API int mbnn_write_synthetic(const mbnn_config* cfg, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MOTORBNN_H */
