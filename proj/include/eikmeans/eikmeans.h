/*
 * C interface to the equal-intensity k-means drift detector.
 *
 * All objects are opaque handles created by the library and released with the
 * matching *_destroy function. Every fallible call returns an eik_status; on
 * failure eik_last_error() describes the problem (per thread).
 */
#ifndef EIKMEANS_EIKMEANS_H
#define EIKMEANS_EIKMEANS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EIKMEANS_BUILDING)
#    define EIKMEANS_API __declspec(dllexport)
#  else
#    define EIKMEANS_API __declspec(dllimport)
#  endif
#else
#  define EIKMEANS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eik_status {
  EIK_OK = 0,
  EIK_ERR_INVALID_ARGUMENT = 1,
  EIK_ERR_DIMENSION_MISMATCH = 2,
  EIK_ERR_DEGENERATE_MODEL = 3,
  EIK_ERR_PARSE = 4,
  EIK_ERR_IO = 5,
  EIK_ERR_UNSUPPORTED_VERSION = 6,
  EIK_ERR_INTERNAL = 99
} eik_status;

/* Warning bits of eik_report_warnings(). */
#define EIK_WARN_LOW_OBSERVED 0x1u
#define EIK_WARN_LOW_EXPECTED 0x2u
#define EIK_WARN_EMPTY_BIN 0x4u

typedef struct eik_matrix eik_matrix;
typedef struct eik_detector eik_detector;
typedef struct eik_report eik_report;

EIKMEANS_API const char* eik_version(void);
EIKMEANS_API const char* eik_status_name(eik_status status);
/* Message of the last failed call on this thread; "" if none. */
EIKMEANS_API const char* eik_last_error(void);

/* ---- sample matrices ---------------------------------------------------- */

EIKMEANS_API eik_status eik_matrix_create(const double* row_major, size_t n, size_t d, eik_matrix** out);
EIKMEANS_API eik_status eik_matrix_read_csv(const char* path, eik_matrix** out);
/* Writes a header line x1,...,xd followed by full-precision rows. */
EIKMEANS_API eik_status eik_matrix_write_csv(const eik_matrix* matrix, const char* path);
EIKMEANS_API size_t eik_matrix_rows(const eik_matrix* matrix);
EIKMEANS_API size_t eik_matrix_cols(const eik_matrix* matrix);
/* Copies rows*cols values in row-major order; capacity is in doubles. */
EIKMEANS_API eik_status eik_matrix_copy_data(const eik_matrix* matrix, double* out, size_t capacity);
EIKMEANS_API void eik_matrix_destroy(eik_matrix* matrix);

/* ---- synthetic data ----------------------------------------------------- */

typedef struct eik_gen_options {
  const char* family; /* "2d-U-mean", "2d-1G-mean", "2d-1G-var", "2d-1G-cov", "2d-2G-mean", "2d-4G-mean" */
  size_t n;
  int drifted;
  double delta;       /* negative: family default */
  int shift_mean;     /* variance/covariance families also shift the mean */
  size_t extra_dims;  /* appended independent N(0,1) columns */
  uint64_t seed;
} eik_gen_options;

EIKMEANS_API void eik_gen_options_init(eik_gen_options* options);
EIKMEANS_API eik_status eik_generate(const eik_gen_options* options, eik_matrix** out);

/* ---- fitting and persistence -------------------------------------------- */

typedef struct eik_fit_options {
  size_t beta;        /* minimum training samples per bin, default 50 */
  double theta_max;   /* default 1.5 */
  double theta_step;  /* default 0.05 */
  size_t max_samples; /* 0: fit on all rows */
  size_t max_iter;    /* kMeans iterations, default 100 */
  double tol;         /* kMeans centroid tolerance, default 1e-6 */
  uint64_t seed;
} eik_fit_options;

typedef struct eik_model_info {
  size_t k;
  size_t dim;
  size_t beta;
  double theta;
  int fallback;
  uint64_t fit_seed;
} eik_model_info;

EIKMEANS_API void eik_fit_options_init(eik_fit_options* options);
EIKMEANS_API eik_status eik_detector_fit(const eik_matrix* train, const eik_fit_options* options,
                                         eik_detector** out);
EIKMEANS_API eik_status eik_detector_save(const eik_detector* detector, const char* path);
EIKMEANS_API eik_status eik_detector_load(const char* path, eik_detector** out);
EIKMEANS_API eik_status eik_detector_info(const eik_detector* detector, eik_model_info* out);
EIKMEANS_API void eik_detector_destroy(eik_detector* detector);

/* ---- detection ---------------------------------------------------------- */

/* Read-only on the detector; concurrent calls on one detector are safe. */
EIKMEANS_API eik_status eik_detect(const eik_detector* detector, const eik_matrix* test, double alpha,
                                   eik_report** out);
EIKMEANS_API int eik_report_drift(const eik_report* report);
EIKMEANS_API double eik_report_p_value(const eik_report* report);
EIKMEANS_API double eik_report_statistic(const eik_report* report);
EIKMEANS_API size_t eik_report_df(const eik_report* report);
EIKMEANS_API size_t eik_report_bins(const eik_report* report);
EIKMEANS_API unsigned eik_report_warnings(const eik_report* report);
/* Either output pointer may be NULL; capacity is per array. */
EIKMEANS_API eik_status eik_report_counts(const eik_report* report, size_t* train, size_t* test, size_t capacity);
/* Strings stay valid until the report is destroyed. */
EIKMEANS_API const char* eik_report_json(const eik_report* report);
EIKMEANS_API const char* eik_report_text(const eik_report* report);
EIKMEANS_API void eik_report_destroy(eik_report* report);

/* ---- benchmark and diagnostics ------------------------------------------ */

typedef struct eik_bench_options {
  const char* family;
  double delta; /* negative: family default */
  size_t extra_dims;
  size_t n_train;
  size_t n_test;
  size_t n_stationary_sets;
  size_t n_drift_sets;
  size_t repetitions;
  double alpha;
  size_t beta;
  size_t max_samples; /* 0: fit on all training rows */
  uint64_t seed;
  size_t threads; /* 0: EIKMEANS_BENCH_THREADS or hardware concurrency */
} eik_bench_options;

typedef struct eik_bench_summary {
  double type1_mean;
  double type1_std;
  double type2_mean;
  double type2_std;
  double wall_seconds;
} eik_bench_summary;

EIKMEANS_API void eik_bench_options_init(eik_bench_options* options);
/* out_csv may be NULL to skip writing the result table. */
EIKMEANS_API eik_status eik_bench_run(const eik_bench_options* options, const char* out_csv,
                                      eik_bench_summary* out);

/* Intensity standard deviation of the equal-intensity partition and of
 * random-init kMeans at the same K, averaged over n_seeds data seeds
 * derived from seed. */
EIKMEANS_API eik_status eik_diag_run(const char* variant, size_t k, uint64_t seed, size_t n_seeds,
                                     double* ei_std, double* kmeans_std);

#ifdef __cplusplus
}
#endif

#endif /* EIKMEANS_EIKMEANS_H */
