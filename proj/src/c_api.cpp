#include "eikmeans/eikmeans.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "eikmeans/bench.hpp"
#include "eikmeans/datagen.hpp"
#include "eikmeans/detector.hpp"
#include "eikmeans/error.hpp"
#include "eikmeans/io.hpp"
#include "eikmeans/rng.hpp"

struct eik_matrix {
  eikmeans::SampleMatrix value;
};

struct eik_detector {
  eikmeans::Detector value;
};

struct eik_report {
  eikmeans::DriftReport value;
  std::string json;
  std::string text;
};

namespace {

thread_local std::string last_error;

eik_status fail(eik_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

eik_status to_status(eikmeans::Errc code) {
  switch (code) {
    case eikmeans::Errc::invalid_argument: return EIK_ERR_INVALID_ARGUMENT;
    case eikmeans::Errc::dimension_mismatch: return EIK_ERR_DIMENSION_MISMATCH;
    case eikmeans::Errc::degenerate_model: return EIK_ERR_DEGENERATE_MODEL;
    case eikmeans::Errc::parse_error: return EIK_ERR_PARSE;
    case eikmeans::Errc::io_error: return EIK_ERR_IO;
    case eikmeans::Errc::unsupported_version: return EIK_ERR_UNSUPPORTED_VERSION;
  }
  return EIK_ERR_INTERNAL;
}

template <typename F>
eik_status guarded(F&& body) noexcept {
  try {
    last_error.clear();
    body();
    return EIK_OK;
  } catch (const eikmeans::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EIK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EIK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EIK_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw eikmeans::Error(eikmeans::Errc::invalid_argument, what);
}

eikmeans::FitOptions to_fit_options(const eik_fit_options& o) {
  eikmeans::FitOptions fit;
  fit.beta = o.beta;
  fit.theta_grid = eikmeans::theta_grid(o.theta_max, o.theta_step);
  fit.max_iter = o.max_iter;
  fit.tol = o.tol;
  fit.seed = o.seed;
  if (o.max_samples > 0) fit.max_samples = o.max_samples;
  return fit;
}

}  // namespace

extern "C" {

const char* eik_version(void) { return "1.0.0"; }

const char* eik_status_name(eik_status status) {
  switch (status) {
    case EIK_OK: return "ok";
    case EIK_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EIK_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case EIK_ERR_DEGENERATE_MODEL: return "degenerate model";
    case EIK_ERR_PARSE: return "parse error";
    case EIK_ERR_IO: return "i/o error";
    case EIK_ERR_UNSUPPORTED_VERSION: return "unsupported version";
    case EIK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* eik_last_error(void) { return last_error.c_str(); }

eik_status eik_matrix_create(const double* row_major, size_t n, size_t d, eik_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    require(n > 0 && d > 0, "matrix must have at least one row and one column");
    require(row_major != nullptr, "matrix data is null");
    *out = new eik_matrix{eikmeans::SampleMatrix::from_row_major({row_major, n * d}, n, d)};
  });
}

eik_status eik_matrix_read_csv(const char* path, eik_matrix** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    *out = nullptr;
    *out = new eik_matrix{eikmeans::parse_csv_file(path)};
  });
}

eik_status eik_matrix_write_csv(const eik_matrix* matrix, const char* path) {
  return guarded([&] {
    require(matrix != nullptr, "refusing to write an empty matrix");
    require(path != nullptr, "null path");
    std::vector<std::string> header;
    for (std::size_t j = 0; j < matrix->value.d(); ++j) header.push_back("x" + std::to_string(j + 1));
    eikmeans::write_csv_file(path, matrix->value, header);
  });
}

size_t eik_matrix_rows(const eik_matrix* matrix) { return matrix ? matrix->value.n() : 0; }

size_t eik_matrix_cols(const eik_matrix* matrix) { return matrix ? matrix->value.d() : 0; }

eik_status eik_matrix_copy_data(const eik_matrix* matrix, double* out, size_t capacity) {
  return guarded([&] {
    require(matrix != nullptr && out != nullptr, "null argument");
    const auto& values = matrix->value.values();
    require(capacity >= static_cast<size_t>(values.size()), "output buffer too small");
    std::copy(values.data(), values.data() + values.size(), out);
  });
}

void eik_matrix_destroy(eik_matrix* matrix) { delete matrix; }

void eik_gen_options_init(eik_gen_options* options) {
  if (!options) return;
  *options = eik_gen_options{"2d-1G-mean", 1000, 0, -1.0, 1, 0, 0};
}

eik_status eik_generate(const eik_gen_options* options, eik_matrix** out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr && options->family != nullptr, "null argument");
    *out = nullptr;
    eikmeans::GeneratorSpec spec;
    spec.family = eikmeans::parse_family(options->family);
    require(spec.family != eikmeans::Family::CustomMixture, "custom mixtures are not available through this call");
    if (options->delta >= 0.0) spec.delta = options->delta;
    spec.drifted = options->drifted != 0;
    spec.n = options->n;
    spec.shift_mean = options->shift_mean != 0;
    spec.extra_dims = options->extra_dims;
    spec.seed = options->seed;
    *out = new eik_matrix{eikmeans::gen_dataset(spec)};
  });
}

void eik_fit_options_init(eik_fit_options* options) {
  if (!options) return;
  *options = eik_fit_options{50, 1.5, 0.05, 0, 100, 1e-6, 0};
}

eik_status eik_detector_fit(const eik_matrix* train, const eik_fit_options* options, eik_detector** out) {
  return guarded([&] {
    require(train != nullptr && options != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new eik_detector{eikmeans::Detector::fit(train->value, to_fit_options(*options))};
  });
}

eik_status eik_detector_save(const eik_detector* detector, const char* path) {
  return guarded([&] {
    require(detector != nullptr && path != nullptr, "null argument");
    eikmeans::save_model(path, detector->value.model());
  });
}

eik_status eik_detector_load(const char* path, eik_detector** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new eik_detector{eikmeans::Detector(eikmeans::load_model(path))};
  });
}

eik_status eik_detector_info(const eik_detector* detector, eik_model_info* out) {
  return guarded([&] {
    require(detector != nullptr && out != nullptr, "null argument");
    const auto& m = detector->value.model();
    *out = eik_model_info{m.k(), m.d(), m.beta, m.theta, m.fallback ? 1 : 0, m.fit_seed};
  });
}

void eik_detector_destroy(eik_detector* detector) { delete detector; }

eik_status eik_detect(const eik_detector* detector, const eik_matrix* test, double alpha, eik_report** out) {
  return guarded([&] {
    require(detector != nullptr && test != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    eikmeans::DriftReport report = detector->value.detect(test->value, alpha);
    std::string json = eikmeans::report_to_json(report);
    std::string text = eikmeans::report_to_text(report);
    *out = new eik_report{std::move(report), std::move(json), std::move(text)};
  });
}

int eik_report_drift(const eik_report* report) { return report && report->value.drift ? 1 : 0; }
double eik_report_p_value(const eik_report* report) { return report ? report->value.p_value : 0.0; }
double eik_report_statistic(const eik_report* report) { return report ? report->value.statistic : 0.0; }
size_t eik_report_df(const eik_report* report) { return report ? report->value.df : 0; }
size_t eik_report_bins(const eik_report* report) { return report ? report->value.train_counts.size() : 0; }
unsigned eik_report_warnings(const eik_report* report) { return report ? report->value.warnings : 0u; }

eik_status eik_report_counts(const eik_report* report, size_t* train, size_t* test, size_t capacity) {
  return guarded([&] {
    require(report != nullptr, "null report");
    const auto& r = report->value;
    require(capacity >= r.train_counts.size(), "output buffer too small");
    if (train) std::copy(r.train_counts.begin(), r.train_counts.end(), train);
    if (test) std::copy(r.test_counts.begin(), r.test_counts.end(), test);
  });
}

const char* eik_report_json(const eik_report* report) { return report ? report->json.c_str() : ""; }
const char* eik_report_text(const eik_report* report) { return report ? report->text.c_str() : ""; }
void eik_report_destroy(eik_report* report) { delete report; }

void eik_bench_options_init(eik_bench_options* options) {
  if (!options) return;
  *options = eik_bench_options{"2d-1G-mean", -1.0, 0, 2000, 200, 250, 250, 10, 0.05, 50, 0, 0, 0};
}

eik_status eik_bench_run(const eik_bench_options* options, const char* out_csv, eik_bench_summary* out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr && options->family != nullptr, "null argument");
    eikmeans::TrialConfig cfg;
    cfg.family = eikmeans::parse_family(options->family);
    if (options->delta >= 0.0) cfg.delta = options->delta;
    cfg.extra_dims = options->extra_dims;
    cfg.n_train = options->n_train;
    cfg.n_test = options->n_test;
    cfg.n_stationary_sets = options->n_stationary_sets;
    cfg.n_drift_sets = options->n_drift_sets;
    cfg.repetitions = options->repetitions;
    cfg.alpha = options->alpha;
    cfg.beta = options->beta;
    if (options->max_samples > 0) cfg.max_samples = options->max_samples;
    cfg.base_seed = options->seed;
    cfg.threads = options->threads;
    const eikmeans::TrialResult result = eikmeans::run_trial(cfg);
    if (out_csv) eikmeans::write_bench_csv_file(out_csv, eikmeans::family_name(cfg.family), cfg, result);
    *out = eik_bench_summary{result.type1_mean, result.type1_std, result.type2_mean, result.type2_std,
                             result.wall_seconds};
  });
}

eik_status eik_diag_run(const char* variant, size_t k, uint64_t seed, size_t n_seeds, double* ei_std,
                        double* kmeans_std) {
  return guarded([&] {
    require(variant != nullptr && ei_std != nullptr && kmeans_std != nullptr, "null argument");
    require(n_seeds > 0, "need at least one seed");
    std::vector<std::uint64_t> seeds;
    for (size_t i = 0; i < n_seeds; ++i) seeds.push_back(eikmeans::derive_seed(seed, i));
    const auto result = eikmeans::run_partition_diagnostic(eikmeans::parse_variant(variant), k, seeds);
    *ei_std = result.ei_intensity_std;
    *kmeans_std = result.kmeans_intensity_std;
  });
}

}  // extern "C"
