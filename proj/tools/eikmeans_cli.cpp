// eikmeans command-line driver. Talks to the library only through the C API.
//
// Exit codes: 0 success / no drift, 1 error, 2 usage error, 3 drift detected.

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "eikmeans/eikmeans.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDrift = 3;

struct MatrixDeleter {
  void operator()(eik_matrix* m) const { eik_matrix_destroy(m); }
};
struct DetectorDeleter {
  void operator()(eik_detector* d) const { eik_detector_destroy(d); }
};
struct ReportDeleter {
  void operator()(eik_report* r) const { eik_report_destroy(r); }
};
using MatrixPtr = std::unique_ptr<eik_matrix, MatrixDeleter>;
using DetectorPtr = std::unique_ptr<eik_detector, DetectorDeleter>;
using ReportPtr = std::unique_ptr<eik_report, ReportDeleter>;

struct CliFailure {
  eik_status status;
};

void check(eik_status status) {
  if (status != EIK_OK) throw CliFailure{status};
}

MatrixPtr read_matrix(const std::string& path) {
  eik_matrix* raw = nullptr;
  check(eik_matrix_read_csv(path.c_str(), &raw));
  return MatrixPtr(raw);
}

struct GenArgs {
  std::string family;
  std::size_t n = 0;
  bool drift = false;
  double delta = -1.0;
  std::size_t extra_dims = 0;
  bool no_mean_shift = false;
  std::uint64_t seed = 0;
  std::string out;
};

struct FitArgs {
  std::string train;
  std::size_t beta = 50;
  double theta_max = 1.5;
  double theta_step = 0.05;
  std::size_t max_samples = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct DetectArgs {
  std::string model;
  std::string test;
  double alpha = 0.05;
  bool json = false;
};

struct BenchArgs {
  std::string family;
  double delta = -1.0;
  std::size_t extra_dims = 0;
  std::size_t n_train = 2000;
  std::size_t n_test = 200;
  std::size_t sets = 250;
  std::size_t reps = 10;
  double alpha = 0.05;
  std::size_t beta = 50;
  std::size_t max_samples = 0;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct DiagArgs {
  std::string variant;
  std::size_t k = 9;
  std::uint64_t seed = 0;
  std::size_t seeds = 20;
};

int run_gen(const GenArgs& a) {
  eik_gen_options o;
  eik_gen_options_init(&o);
  o.family = a.family.c_str();
  o.n = a.n;
  o.drifted = a.drift ? 1 : 0;
  o.delta = a.delta;
  o.shift_mean = a.no_mean_shift ? 0 : 1;
  o.extra_dims = a.extra_dims;
  o.seed = a.seed;
  eik_matrix* raw = nullptr;
  check(eik_generate(&o, &raw));
  MatrixPtr m(raw);
  check(eik_matrix_write_csv(m.get(), a.out.c_str()));
  std::cout << "wrote " << eik_matrix_rows(m.get()) << " x " << eik_matrix_cols(m.get()) << " samples to "
            << a.out << '\n';
  return kExitOk;
}

int run_fit(const FitArgs& a) {
  MatrixPtr train = read_matrix(a.train);
  eik_fit_options o;
  eik_fit_options_init(&o);
  o.beta = a.beta;
  o.theta_max = a.theta_max;
  o.theta_step = a.theta_step;
  o.max_samples = a.max_samples;
  o.seed = a.seed;
  eik_detector* raw = nullptr;
  check(eik_detector_fit(train.get(), &o, &raw));
  DetectorPtr det(raw);
  check(eik_detector_save(det.get(), a.out.c_str()));
  eik_model_info info{};
  check(eik_detector_info(det.get(), &info));
  std::cout << "K=" << info.k << " theta=" << info.theta << " fallback=" << (info.fallback ? "true" : "false")
            << '\n';
  return kExitOk;
}

int run_detect(const DetectArgs& a) {
  eik_detector* raw_det = nullptr;
  check(eik_detector_load(a.model.c_str(), &raw_det));
  DetectorPtr det(raw_det);
  MatrixPtr test = read_matrix(a.test);
  eik_report* raw_report = nullptr;
  check(eik_detect(det.get(), test.get(), a.alpha, &raw_report));
  ReportPtr report(raw_report);
  if (a.json) {
    std::cout << eik_report_json(report.get()) << '\n';
  } else {
    std::cout << eik_report_text(report.get());
  }
  return eik_report_drift(report.get()) ? kExitDrift : kExitOk;
}

int run_bench(const BenchArgs& a) {
  eik_bench_options o;
  eik_bench_options_init(&o);
  o.family = a.family.c_str();
  o.delta = a.delta;
  o.extra_dims = a.extra_dims;
  o.n_train = a.n_train;
  o.n_test = a.n_test;
  o.n_stationary_sets = a.sets;
  o.n_drift_sets = a.sets;
  o.repetitions = a.reps;
  o.alpha = a.alpha;
  o.beta = a.beta;
  o.max_samples = a.max_samples;
  o.threads = a.threads;
  o.seed = a.seed;
  eik_bench_summary s{};
  check(eik_bench_run(&o, a.out.c_str(), &s));
  std::printf("%s: Type-I %.2f +/- %.2f %%, Type-II %.2f +/- %.2f %% (%zu reps, %.1f s)\n", a.family.c_str(),
              s.type1_mean, s.type1_std, s.type2_mean, s.type2_std, a.reps, s.wall_seconds);
  return kExitOk;
}

int run_diag(const DiagArgs& a) {
  double ei = 0.0, km = 0.0;
  check(eik_diag_run(a.variant.c_str(), a.k, a.seed, a.seeds, &ei, &km));
  std::printf("variant=%s K=%zu seeds=%zu\n", a.variant.c_str(), a.k, a.seeds);
  std::printf("ei-kmeans intensity std: %.6f\n", ei);
  std::printf("kmeans    intensity std: %.6f\n", km);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equal-intensity k-means histogram drift detection"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic data set as CSV");
  gen_cmd->add_option("--family", gen.family, "2d-U-mean, 2d-1G-mean, 2d-1G-var, 2d-1G-cov, 2d-2G-mean, 2d-4G-mean")
      ->required();
  gen_cmd->add_option("--n", gen.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--drift", gen.drift, "Generate the drifted distribution");
  gen_cmd->add_option("--delta", gen.delta, "Drift margin (default: family value)")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--extra-dims", gen.extra_dims, "Append independent N(0,1) columns");
  gen_cmd->add_flag("--no-mean-shift", gen.no_mean_shift, "Variance/covariance families: keep the mean fixed");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a histogram model on training data");
  fit_cmd->add_option("--train", fit.train, "Training CSV")->required();
  fit_cmd->add_option("--beta", fit.beta, "Minimum training samples per bin")->capture_default_str()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--theta-max", fit.theta_max, "Largest amplify parameter")->capture_default_str();
  fit_cmd->add_option("--theta-step", fit.theta_step, "Amplify parameter grid step")->capture_default_str();
  fit_cmd->add_option("--max-samples", fit.max_samples, "Fit on a random subset of this many rows");
  fit_cmd->add_option("--seed", fit.seed, "RNG seed")->required();
  fit_cmd->add_option("--out", fit.out, "Output model path")->required();

  DetectArgs det;
  auto* det_cmd = app.add_subcommand("detect", "Test a data set for drift against a model");
  det_cmd->add_option("--model", det.model, "Model file")->required();
  det_cmd->add_option("--test", det.test, "Test CSV")->required();
  det_cmd->add_option("--alpha", det.alpha, "Significance level")->capture_default_str();
  det_cmd->add_flag("--json", det.json, "Print the report as one JSON line");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Estimate Type-I/Type-II error rates");
  bench_cmd->add_option("--family", bench.family, "Data family")->required();
  bench_cmd->add_option("--delta", bench.delta, "Drift margin (default: family value)")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--extra-dims", bench.extra_dims, "Append independent N(0,1) columns");
  bench_cmd->add_option("--n-train", bench.n_train, "Training set size")->capture_default_str();
  bench_cmd->add_option("--n-test", bench.n_test, "Test set size")->capture_default_str();
  bench_cmd->add_option("--sets", bench.sets, "Stationary and drifted test sets per repetition")->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps, "Repetitions")->capture_default_str();
  bench_cmd->add_option("--alpha", bench.alpha, "Significance level")->capture_default_str();
  bench_cmd->add_option("--beta", bench.beta, "Minimum training samples per bin")->capture_default_str();
  bench_cmd->add_option("--max-samples", bench.max_samples, "Fit each histogram on a random subset of this many rows");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0: automatic)");
  bench_cmd->add_option("--seed", bench.seed, "Base seed")->required();
  bench_cmd->add_option("--out", bench.out, "Result CSV path")->required();

  DiagArgs diag;
  auto* diag_cmd = app.add_subcommand("diag", "Compare partition intensity spread with plain kMeans");
  diag_cmd->add_option("--variant", diag.variant, "1G, 3G-111 or 3G-135")->required();
  diag_cmd->add_option("--k", diag.k, "Number of partitions")->capture_default_str();
  diag_cmd->add_option("--seed", diag.seed, "Base seed")->required();
  diag_cmd->add_option("--seeds", diag.seeds, "Number of data seeds to average over")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*fit_cmd) return run_fit(fit);
    if (*det_cmd) return run_detect(det);
    if (*bench_cmd) return run_bench(bench);
    if (*diag_cmd) return run_diag(diag);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << eik_last_error() << " (" << eik_status_name(f.status) << ")\n";
    return kExitError;
  }
  return kExitUsage;
}
